//! Brute-force reference implementations.
//!
//! Nothing here reuses the traversal or linear-algebra code of the main
//! pipelines: adjacency lists, depth-first search, union–find and matrix
//! products are all local. Only the [`Graph`] edge list and the [`Matrix`]
//! container are shared.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::matrix::Matrix;

pub const PATH_VERTEX_CAP: usize = 12;
pub const EDGE_CAP: usize = 20;

/// One simple path as an alternating vertex/edge sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct PathRecord {
    pub vertices: Vec<usize>,
    /// Indices into [`Graph::edges`].
    pub edges: Vec<usize>,
    pub length: usize,
    /// Product of edge weights, multiplied left to right.
    pub weight: f64,
}

/// Every simple path between two vertices, in lexicographic order of
/// `(next vertex, edge index)` choices.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PathList {
    pub paths: Vec<PathRecord>,
}

fn neighbour_lists(g: &Graph) -> Vec<Vec<(usize, usize)>> {
    let mut lists = vec![Vec::new(); g.order()];
    for (idx, e) in g.edges().iter().enumerate() {
        if e.u != e.v {
            lists[e.u].push((e.v, idx));
            lists[e.v].push((e.u, idx));
        }
    }
    for l in &mut lists {
        l.sort();
    }
    lists
}

pub fn enumerate_paths(g: &Graph, from: usize, to: usize) -> Result<PathList> {
    if g.order() > PATH_VERTEX_CAP {
        return Err(Error::CapExceeded {
            what: "vertex count",
            actual: g.order(),
            cap: PATH_VERTEX_CAP,
        });
    }
    if from == to {
        return Ok(PathList {
            paths: vec![PathRecord {
                vertices: vec![from],
                edges: vec![],
                length: 0,
                weight: 1.0,
            }],
        });
    }
    let lists = neighbour_lists(g);
    let mut out = Vec::new();
    // explicit stack of (vertex, next neighbour slot)
    let mut vertices = vec![from];
    let mut edges: Vec<usize> = Vec::new();
    let mut on_path = vec![false; g.order()];
    on_path[from] = true;
    let mut cursor = vec![0usize];
    while let Some(slot) = cursor.last_mut() {
        let at = *vertices.last().unwrap();
        if *slot == lists[at].len() {
            cursor.pop();
            on_path[at] = false;
            vertices.pop();
            edges.pop();
            continue;
        }
        let (next, edge) = lists[at][*slot];
        *slot += 1;
        if on_path[next] {
            continue;
        }
        if next == to {
            let mut all_edges = edges.clone();
            all_edges.push(edge);
            let mut all_vertices = vertices.clone();
            all_vertices.push(next);
            let mut weight = 1.0;
            for &e in &all_edges {
                weight *= g.edges()[e].weight;
            }
            out.push(PathRecord {
                length: all_edges.len(),
                vertices: all_vertices,
                edges: all_edges,
                weight,
            });
            continue;
        }
        on_path[next] = true;
        vertices.push(next);
        edges.push(edge);
        cursor.push(0);
    }
    Ok(PathList { paths: out })
}

/// Path τ-accessibility summed path by path from [`enumerate_paths`].
pub fn path_accessibility_by_enumeration(g: &Graph, tau: f64) -> Result<Matrix> {
    let n = g.order();
    let mut s = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let mut total = 0.0;
            for p in enumerate_paths(g, i, j)?.paths {
                total += tau.powi(p.length as i32) * p.weight;
            }
            s[(i, j)] = total;
        }
    }
    Ok(s)
}

/// `Σ_{k=0}^{K} (tA)^k` and an entrywise bound on the omitted tail.
#[derive(Debug, Clone)]
pub struct WalkSeries {
    pub sum: Matrix,
    /// Upper bound on the spectral radius used in the tail bound.
    pub rho_bound: f64,
    /// `(tρ̄)^{K+1} / (1 − tρ̄)`; infinite when `tρ̄ ≥ 1`.
    pub tail_bound: f64,
}

pub fn truncated_walk_sum(g: &Graph, t: f64, terms: usize) -> WalkSeries {
    let n = g.order();
    let mut a = vec![vec![0.0; n]; n];
    for e in g.edges() {
        a[e.u][e.v] += e.weight;
        if e.u != e.v {
            a[e.v][e.u] += e.weight;
        }
    }
    let mut sum = vec![vec![0.0; n]; n];
    let mut term = vec![vec![0.0; n]; n];
    for i in 0..n {
        sum[i][i] = 1.0;
        term[i][i] = 1.0;
    }
    for _ in 0..terms {
        let mut next = vec![vec![0.0; n]; n];
        for i in 0..n {
            for k in 0..n {
                if term[i][k] == 0.0 {
                    continue;
                }
                for j in 0..n {
                    next[i][j] += term[i][k] * t * a[k][j];
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                sum[i][j] += next[i][j];
            }
        }
        term = next;
    }

    let rho_bound = collatz_wielandt_bound(&a);
    let x = t * rho_bound;
    let tail_bound = if x < 1.0 {
        x.powi(terms as i32 + 1) / (1.0 - x)
    } else {
        f64::INFINITY
    };
    WalkSeries {
        sum: Matrix::from_fn(n, |i, j| sum[i][j]),
        rho_bound,
        tail_bound,
    }
}

// ρ(A) ≤ max_i (Ax)_i / x_i for any positive x; x from a few hundred
// iterations of (A + I)x.
fn collatz_wielandt_bound(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut x = vec![1.0; n];
    for _ in 0..500 {
        let mut y: Vec<f64> = (0..n)
            .map(|i| x[i] + (0..n).map(|j| a[i][j] * x[j]).sum::<f64>())
            .collect();
        let norm = y.iter().cloned().fold(0.0, f64::max);
        y.iter_mut().for_each(|v| *v /= norm);
        x = y;
    }
    (0..n)
        .map(|i| (0..n).map(|j| a[i][j] * x[j]).sum::<f64>() / x[i])
        .fold(0.0, f64::max)
}

struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// False when `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

fn links(g: &Graph) -> Result<Vec<(usize, usize, f64)>> {
    let links: Vec<_> = g
        .edges()
        .iter()
        .filter(|e| e.u != e.v)
        .map(|e| (e.u, e.v, e.weight))
        .collect();
    if links.len() > EDGE_CAP {
        return Err(Error::CapExceeded {
            what: "edge count",
            actual: links.len(),
            cap: EDGE_CAP,
        });
    }
    Ok(links)
}

/// Probability that `i` and `j` stay connected when every edge survives
/// independently with probability equal to its weight, by summing over all
/// `2^m` survival patterns.
pub fn reliability_by_edge_states(g: &Graph, i: usize, j: usize) -> Result<f64> {
    Ok(reliability_matrix_by_edge_states(g)?[(i, j)])
}

/// [`reliability_by_edge_states`] for every pair at once.
pub fn reliability_matrix_by_edge_states(g: &Graph) -> Result<Matrix> {
    let links = links(g)?;
    if let Some(&(u, v, w)) = links.iter().find(|l| !(l.2 > 0.0 && l.2 <= 1.0)) {
        return Err(Error::ParameterOutOfRange {
            name: "edge weight",
            value: w,
            reason: format!("edge {}-{} must have weight in (0, 1]", u + 1, v + 1),
        });
    }
    let n = g.order();
    let mut p = Matrix::zeros(n);
    for state in 0u32..(1u32 << links.len()) {
        let mut prob = 1.0;
        let mut dsu = Dsu::new(n);
        for (bit, &(u, v, w)) in links.iter().enumerate() {
            if state & (1 << bit) != 0 {
                prob *= w;
                dsu.union(u, v);
            } else {
                prob *= 1.0 - w;
            }
        }
        if prob == 0.0 {
            continue;
        }
        let roots: Vec<usize> = (0..n).map(|x| dsu.find(x)).collect();
        for a in 0..n {
            for b in 0..n {
                if roots[a] == roots[b] {
                    p[(a, b)] += prob;
                }
            }
        }
    }
    Ok(p)
}

/// Totals over all spanning rooted forests.
#[derive(Debug, Clone, PartialEq)]
pub struct RootedForestSummary {
    /// Total weight of all spanning rooted forests.
    pub f: f64,
    /// `f_ij`: weight of the forests in which `i` lies in the tree rooted at `j`.
    pub f_ij: Matrix,
}

/// Enumerates acyclic edge subsets; a subset whose trees have sizes
/// `n_1, …, n_c` carries `∏ n_a` rootings.
pub fn enumerate_rooted_forests(g: &Graph) -> Result<RootedForestSummary> {
    let links = links(g)?;
    let n = g.order();
    let mut total = 0.0;
    let mut fij = Matrix::zeros(n);
    'subsets: for subset in 0u32..(1u32 << links.len()) {
        let mut dsu = Dsu::new(n);
        let mut weight = 1.0;
        for (bit, &(u, v, w)) in links.iter().enumerate() {
            if subset & (1 << bit) != 0 {
                if !dsu.union(u, v) {
                    continue 'subsets;
                }
                weight *= w;
            }
        }
        let roots: Vec<usize> = (0..n).map(|x| dsu.find(x)).collect();
        let mut tree_size = vec![0usize; n];
        for &r in &roots {
            tree_size[r] += 1;
        }
        let rootings: f64 = tree_size
            .iter()
            .filter(|&&s| s > 0)
            .map(|&s| s as f64)
            .product();
        total += weight * rootings;
        // i in the tree rooted at j: fix j as that tree's root, root the
        // other trees freely
        for i in 0..n {
            for j in 0..n {
                if roots[i] == roots[j] {
                    fij[(i, j)] += weight * rootings / tree_size[roots[i]] as f64;
                }
            }
        }
    }
    Ok(RootedForestSummary {
        f: total,
        f_ij: fij,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_enumeration_examples() {
        let p3 = Graph::path(3).unwrap();
        let list = enumerate_paths(&p3, 0, 2).unwrap();
        assert_eq!(list.paths.len(), 1);
        assert_eq!(list.paths[0].length, 2);
        assert_eq!(list.paths[0].vertices, vec![0, 1, 2]);

        let k3 = Graph::complete(3).unwrap();
        let lengths: Vec<usize> = enumerate_paths(&k3, 0, 1)
            .unwrap()
            .paths
            .iter()
            .map(|p| p.length)
            .collect();
        assert_eq!(lengths, vec![1, 2]);

        let doubled = Graph::new(2, [(0, 1, 1.0), (0, 1, 1.0)]).unwrap();
        let list = enumerate_paths(&doubled, 0, 1).unwrap();
        assert_eq!(list.paths.len(), 2);
        assert!(list.paths.iter().all(|p| p.length == 1));
        assert_ne!(list.paths[0].edges, list.paths[1].edges);

        let trivial = enumerate_paths(&p3, 1, 1).unwrap();
        assert_eq!(
            trivial.paths,
            vec![PathRecord {
                vertices: vec![1],
                edges: vec![],
                length: 0,
                weight: 1.0
            }]
        );
    }

    #[test]
    fn path_records_are_consistent() {
        let g = Graph::new(
            4,
            [
                (0, 1, 0.5),
                (1, 2, 0.25),
                (0, 2, 2.0),
                (2, 3, 1.5),
                (1, 3, 3.0),
                (1, 1, 9.0),
            ],
        )
        .unwrap();
        for p in enumerate_paths(&g, 0, 3).unwrap().paths {
            let mut seen = p.vertices.clone();
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), p.vertices.len());
            assert_eq!(p.edges.len(), p.length);
            for (step, &e) in p.edges.iter().enumerate() {
                let edge = g.edges()[e];
                let (a, b) = (p.vertices[step], p.vertices[step + 1]);
                assert!((edge.u, edge.v) == (a, b) || (edge.u, edge.v) == (b, a));
            }
            let w: f64 = p.edges.iter().map(|&e| g.edges()[e].weight).product();
            assert!((w - p.weight).abs() < 1e-15);
        }
    }

    #[test]
    fn walk_series_examples() {
        let p2 = Graph::path(2).unwrap();
        assert_eq!(truncated_walk_sum(&p2, 0.5, 0).sum, Matrix::identity(2));

        let series = truncated_walk_sum(&p2, 0.5, 60);
        let exact = Matrix::from_rows(&[[4.0 / 3.0, 2.0 / 3.0], [2.0 / 3.0, 4.0 / 3.0]]).unwrap();
        assert!(series.sum.max_abs_diff(&exact) < 1e-15);

        let k3 = Graph::complete(3).unwrap();
        let series = truncated_walk_sum(&k3, 0.3, 40);
        // eigenvalues of I − 0.3A: 0.4 on 1, 1.3 on its complement
        let exact = Matrix::from_fn(3, |i, j| {
            if i == j {
                5.0 / 6.0 + 20.0 / 39.0
            } else {
                5.0 / 6.0 - 10.0 / 39.0
            }
        });
        assert!(series.sum.max_abs_diff(&exact) < 1e-9);
        assert!(series.tail_bound < 1e-8);
        assert!((series.rho_bound - 2.0).abs() < 1e-9);
    }

    #[test]
    fn edge_state_examples() {
        let p2 = Graph::new(2, [(0, 1, 0.5)]).unwrap();
        assert_eq!(reliability_by_edge_states(&p2, 0, 1).unwrap(), 0.5);

        let k3 = Graph::new(3, [(0, 1, 0.5), (0, 2, 0.5), (1, 2, 0.5)]).unwrap();
        assert!((reliability_by_edge_states(&k3, 0, 1).unwrap() - 0.625).abs() < 1e-15);

        let p3 = Graph::new(3, [(0, 1, 0.9), (1, 2, 0.9)]).unwrap();
        assert!((reliability_by_edge_states(&p3, 0, 2).unwrap() - 0.81).abs() < 1e-15);
    }

    #[test]
    fn rooted_forest_examples() {
        let p2 = enumerate_rooted_forests(&Graph::path(2).unwrap()).unwrap();
        assert_eq!(p2.f, 3.0);
        assert_eq!(p2.f_ij[(0, 0)], 2.0);
        assert_eq!(p2.f_ij[(0, 1)], 1.0);

        let p3 = enumerate_rooted_forests(&Graph::path(3).unwrap()).unwrap();
        assert_eq!(p3.f, 8.0);
        let expected =
            Matrix::from_rows(&[[5.0, 2.0, 1.0], [2.0, 4.0, 2.0], [1.0, 2.0, 5.0]]).unwrap();
        assert_eq!(p3.f_ij, expected);

        assert_eq!(
            enumerate_rooted_forests(&Graph::path(4).unwrap())
                .unwrap()
                .f,
            21.0
        );
    }

    #[test]
    fn rooted_forest_row_sums() {
        let g = Graph::new(
            4,
            [
                (0, 1, 0.5),
                (1, 2, 0.25),
                (0, 2, 2.0),
                (2, 3, 1.5),
                (2, 3, 0.1),
                (3, 3, 4.0),
            ],
        )
        .unwrap();
        let s = enumerate_rooted_forests(&g).unwrap();
        for row in s.f_ij.row_sums() {
            assert!((row - s.f).abs() < 1e-12 * s.f);
        }
    }

    #[test]
    fn caps_fail_loudly() {
        let big = Graph::path(13).unwrap();
        assert!(matches!(
            enumerate_paths(&big, 0, 12),
            Err(Error::CapExceeded { .. })
        ));
        let dense = Graph::complete(7).unwrap();
        assert!(matches!(
            enumerate_rooted_forests(&dense),
            Err(Error::CapExceeded { .. })
        ));
    }
}
