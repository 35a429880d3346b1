//! Weighted multigraphs: construction, the edge-list file format, the
//! adjacency and Laplacian matrices, and the cutpoint oracle.
//!
//! Vertices are 0-based `usize` indices inside the library. The text
//! format and every user-facing report use 1-based ids.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::distances::{DistanceMatrix, Metric};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// One edge instance. `u == v` is a loop; repeated `(u, v)` pairs are
/// distinct parallel edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

impl Edge {
    #[inline]
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint opposite to `x`.
    #[inline]
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// A connected weighted multigraph with parallel edges and loops.
///
/// Connectivity (ignoring loops) and positivity of weights are checked once
/// at construction; every downstream operation relies on them.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    /// Non-loop incidences per vertex as `(neighbour, edge index)`, sorted.
    incidence: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    /// Builds a graph on vertices `0..n` from `(u, v, weight)` triples.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewVertices(n));
        }
        let mut list = Vec::new();
        for (u, v, weight) in edges {
            for id in [u, v] {
                if id >= n {
                    return Err(Error::VertexOutOfRange { id: id + 1, n });
                }
            }
            if !(weight.is_finite() && weight > 0.0) {
                return Err(Error::InvalidWeight {
                    u: u + 1,
                    v: v + 1,
                    weight,
                });
            }
            list.push(Edge { u, v, weight });
        }
        let mut incidence = vec![Vec::new(); n];
        for (idx, e) in list.iter().enumerate() {
            if !e.is_loop() {
                incidence[e.u].push((e.v, idx));
                incidence[e.v].push((e.u, idx));
            }
        }
        for inc in &mut incidence {
            inc.sort_unstable();
        }
        let g = Graph {
            n,
            edges: list,
            incidence,
        };
        let reach = g.reachable_from(0, None);
        if let Some(missing) = reach.iter().position(|r| !r) {
            return Err(Error::Disconnected(missing + 1));
        }
        Ok(g)
    }

    /// Parses the edge-list text format: `n`, then one `u v w` line per
    /// edge with 1-based ids; `#` starts a comment anywhere on a line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());

        let (first_line, header) = lines.next().ok_or(Error::Syntax {
            line: text.lines().count().max(1),
            message: "missing vertex count".into(),
        })?;
        let n: usize = header.parse().map_err(|_| Error::Syntax {
            line: first_line,
            message: format!("expected vertex count, found {header:?}"),
        })?;
        if n < 2 {
            return Err(Error::TooFewVertices(n));
        }

        let mut edges = Vec::new();
        for (line, content) in lines {
            let fields: Vec<&str> = content.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Syntax {
                    line,
                    message: format!("expected `u v w`, found {} fields", fields.len()),
                });
            }
            let id = |s: &str| -> Result<usize> {
                let id: usize = s.parse().map_err(|_| Error::Syntax {
                    line,
                    message: format!("invalid vertex id {s:?}"),
                })?;
                if id == 0 || id > n {
                    return Err(Error::VertexOutOfRange { id, n });
                }
                Ok(id - 1)
            };
            let (u, v) = (id(fields[0])?, id(fields[1])?);
            let w: f64 = fields[2].parse().map_err(|_| Error::Syntax {
                line,
                message: format!("invalid weight {:?}", fields[2]),
            })?;
            edges.push((u, v, w));
        }
        Graph::new(n, edges)
    }

    /// Number of vertices.
    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    /// All edge instances, loops included, in input order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Number of non-loop edge instances.
    pub fn link_count(&self) -> usize {
        self.edges.iter().filter(|e| !e.is_loop()).count()
    }

    /// Non-loop incidences of `v` as `(neighbour, edge index)`, sorted by
    /// neighbour then edge index.
    pub fn incidences(&self, v: usize) -> &[(usize, usize)] {
        &self.incidence[v]
    }

    /// The same graph with every edge weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Graph> {
        Graph::new(
            self.n,
            self.edges.iter().map(|e| (e.u, e.v, e.weight * factor)),
        )
    }

    /// True when the underlying simple graph (loops and multiplicities
    /// dropped) is a tree.
    pub fn is_tree(&self) -> bool {
        let mut pairs: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|e| !e.is_loop())
            .map(|e| (e.u.min(e.v), e.u.max(e.v)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs.len() == self.n - 1 && self.link_count() == self.n - 1
    }

    /// Serialises to the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for e in &self.edges {
            s.push_str(&format!("{} {} {}\n", e.u + 1, e.v + 1, e.weight));
        }
        s
    }

    /// Weighted adjacency matrix: `a_ij` is the total weight of the edges
    /// joining `i` and `j`; loops land on the diagonal.
    pub fn adjacency_matrix(&self) -> Matrix {
        let mut a = Matrix::zeros(self.n);
        for e in &self.edges {
            a[(e.u, e.v)] += e.weight;
            if !e.is_loop() {
                a[(e.v, e.u)] += e.weight;
            }
        }
        a
    }

    /// `L = diag(A·1) − A`. Loop weights appear in both terms and cancel,
    /// so they are skipped outright.
    pub fn laplacian(&self) -> Matrix {
        let mut l = Matrix::zeros(self.n);
        for e in self.edges.iter().filter(|e| !e.is_loop()) {
            l[(e.u, e.v)] -= e.weight;
            l[(e.v, e.u)] -= e.weight;
            l[(e.u, e.u)] += e.weight;
            l[(e.v, e.v)] += e.weight;
        }
        l
    }

    /// True iff every `i`–`k` path visits `j`. Endpoints count as visited,
    /// so `j == i` or `j == k` is always true.
    pub fn is_cutpoint_between(&self, j: usize, i: usize, k: usize) -> bool {
        if j == i || j == k {
            return true;
        }
        !self.reachable_from(i, Some(j))[k]
    }

    /// `is_cutpoint_between(j, i, k)` for every `k` at once (one BFS).
    pub fn cutpoint_row(&self, j: usize, i: usize) -> Vec<bool> {
        if j == i {
            return vec![true; self.n];
        }
        let mut row: Vec<bool> = self
            .reachable_from(i, Some(j))
            .into_iter()
            .map(|r| !r)
            .collect();
        row[j] = true;
        row
    }

    fn reachable_from(&self, start: usize, removed: Option<usize>) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &self.incidence[x] {
                if !seen[y] && Some(y) != removed {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        seen
    }

    fn hop_counts_from(&self, start: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &self.incidence[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Unweighted shortest-path distance (number of edges), by BFS from
    /// every vertex. Edge weights and loops are ignored.
    pub fn shortest_path_lengths(&self) -> DistanceMatrix {
        let mut d = Matrix::zeros(self.n);
        for s in 0..self.n {
            for (t, hops) in self.hop_counts_from(s).into_iter().enumerate() {
                d[(s, t)] = hops as f64;
            }
        }
        DistanceMatrix::new(d, Metric::Shortest)
    }

    pub fn path(n: usize) -> Result<Graph> {
        Graph::new(n, (1..n).map(|i| (i - 1, i, 1.0)))
    }

    pub fn cycle(n: usize) -> Result<Graph> {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n, 1.0)))
    }

    pub fn complete(n: usize) -> Result<Graph> {
        Graph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j, 1.0))))
    }

    /// Star with centre 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Result<Graph> {
        Graph::new(leaves + 1, (1..=leaves).map(|i| (0, i, 1.0)))
    }

    /// `K4` minus the edge `{1, 4}` (1-based).
    pub fn diamond() -> Result<Graph> {
        Graph::new(
            4,
            [
                (0, 1, 1.0),
                (0, 2, 1.0),
                (1, 2, 1.0),
                (1, 3, 1.0),
                (2, 3, 1.0),
            ],
        )
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Graph::parse(s)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_edge_list())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_graph() {
        let g = Graph::parse("2\n1 2 1.0").unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(
            g.edges(),
            &[Edge {
                u: 0,
                v: 1,
                weight: 1.0
            }]
        );
    }

    #[test]
    fn parses_parallel_edges_and_comments() {
        let g = Graph::parse("# doubled edge\n2\n\n1 2 0.5\n# again\n1 2 0.5\n").unwrap();
        assert_eq!(g.edges().len(), 2);
        assert_eq!(g.link_count(), 2);
        let g = Graph::parse("3 # vertices\n1 2 1   # first\n2 3 0.5#second\n").unwrap();
        assert_eq!(g.edges()[1].weight, 0.5);
    }

    #[test]
    fn rejects_disconnected_input() {
        assert_eq!(Graph::parse("3\n1 2 1"), Err(Error::Disconnected(3)));
        // a loop does not connect anything
        assert_eq!(Graph::parse("2\n1 1 1\n2 2 1"), Err(Error::Disconnected(2)));
    }

    #[test]
    fn reports_syntax_errors_with_line_numbers() {
        match Graph::parse("# c\n3\n1 2 1\n2 3\n") {
            Err(Error::Syntax { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            Graph::parse("x\n"),
            Err(Error::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            Graph::parse("2\n1 2 abc"),
            Err(Error::Syntax { line: 2, .. })
        ));
        assert!(matches!(Graph::parse(""), Err(Error::Syntax { .. })));
    }

    #[test]
    fn rejects_bad_weights_and_ids() {
        assert!(matches!(
            Graph::parse("2\n1 2 0"),
            Err(Error::InvalidWeight { .. })
        ));
        assert!(matches!(
            Graph::parse("2\n1 2 -1"),
            Err(Error::InvalidWeight { .. })
        ));
        assert!(matches!(
            Graph::parse("2\n1 2 inf"),
            Err(Error::InvalidWeight { .. })
        ));
        assert_eq!(
            Graph::parse("2\n1 3 1"),
            Err(Error::VertexOutOfRange { id: 3, n: 2 })
        );
        assert_eq!(
            Graph::parse("2\n0 1 1"),
            Err(Error::VertexOutOfRange { id: 0, n: 2 })
        );
        assert_eq!(Graph::parse("1\n"), Err(Error::TooFewVertices(1)));
    }

    #[test]
    fn edge_list_round_trips() {
        let g = Graph::parse("3\n1 2 0.25\n2 3 2\n3 3 1.5\n1 2 0.75\n").unwrap();
        assert_eq!(Graph::parse(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn adjacency_sums_parallel_edges_and_keeps_loops() {
        let p2 = Graph::path(2).unwrap();
        assert_eq!(
            p2.adjacency_matrix(),
            Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap()
        );

        let doubled = Graph::new(2, [(0, 1, 0.5), (0, 1, 0.5)]).unwrap();
        assert_eq!(doubled.adjacency_matrix(), p2.adjacency_matrix());

        let looped = Graph::new(2, [(0, 0, 2.0), (0, 1, 1.0)]).unwrap();
        assert_eq!(
            looped.adjacency_matrix(),
            Matrix::from_rows(&[[2.0, 1.0], [1.0, 0.0]]).unwrap()
        );
    }

    #[test]
    fn laplacian_of_paths() {
        let p2 = Graph::path(2).unwrap();
        assert_eq!(
            p2.laplacian(),
            Matrix::from_rows(&[[1.0, -1.0], [-1.0, 1.0]]).unwrap()
        );

        let p3 = Graph::path(3).unwrap();
        let expected =
            Matrix::from_rows(&[[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]]).unwrap();
        assert_eq!(p3.laplacian(), expected);
        assert!(p3.laplacian().row_sums().iter().all(|s| s.abs() < 1e-12));
    }

    #[test]
    fn laplacian_ignores_loops() {
        let looped = Graph::new(2, [(0, 0, 5.0), (0, 1, 1.0)]).unwrap();
        // diag(A·1) − A computed literally
        let a = looped.adjacency_matrix();
        let deg = a.row_sums();
        let literal = Matrix::from_fn(2, |i, j| if i == j { deg[i] } else { 0.0 }).sub(&a);
        assert_eq!(looped.laplacian(), literal);
        assert_eq!(looped.laplacian(), Graph::path(2).unwrap().laplacian());
    }

    #[test]
    fn cutpoint_oracle_examples() {
        let p3 = Graph::path(3).unwrap();
        assert!(p3.is_cutpoint_between(1, 0, 2));
        let k3 = Graph::complete(3).unwrap();
        assert!(!k3.is_cutpoint_between(2, 0, 1));
        for g in [&p3, &k3] {
            for i in 0..3 {
                for k in 0..3 {
                    assert!(g.is_cutpoint_between(i, i, k));
                    assert!(g.is_cutpoint_between(k, i, k));
                }
            }
        }
        // i == k with j elsewhere: the trivial path avoids j
        assert!(!p3.is_cutpoint_between(1, 0, 0));
    }

    #[test]
    fn shortest_paths_count_edges() {
        let p4 = Graph::path(4).unwrap();
        assert_eq!(p4.shortest_path_lengths().matrix()[(0, 3)], 3.0);
        let k3 = Graph::complete(3).unwrap();
        let d = k3.shortest_path_lengths();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(d.matrix()[(i, j)], if i == j { 0.0 } else { 1.0 });
            }
        }
        let multi = Graph::new(3, [(0, 1, 0.1), (0, 1, 7.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(multi.shortest_path_lengths().matrix()[(0, 1)], 1.0);
    }

    #[test]
    fn tree_detection() {
        assert!(Graph::path(4).unwrap().is_tree());
        assert!(Graph::star(3).unwrap().is_tree());
        assert!(!Graph::cycle(4).unwrap().is_tree());
        assert!(!Graph::new(2, [(0, 1, 1.0), (0, 1, 1.0)]).unwrap().is_tree());
        assert!(Graph::new(2, [(0, 1, 1.0), (1, 1, 1.0)]).unwrap().is_tree());
    }
}
