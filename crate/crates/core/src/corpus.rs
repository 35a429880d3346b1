//! Random connected weighted multigraphs for property tests and benchmarks.

use rand::Rng;

use crate::graph::Graph;

/// Shape limits for [`random_multigraph`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorpusShape {
    pub min_vertices: usize,
    pub max_vertices: usize,
    /// Cap on non-loop edges, parallel edges included.
    pub max_links: usize,
    pub max_loops: usize,
    /// Chance that an extra edge duplicates an existing vertex pair.
    pub parallel_probability: f64,
}

impl Default for CorpusShape {
    fn default() -> Self {
        CorpusShape {
            min_vertices: 2,
            max_vertices: 7,
            max_links: 12,
            max_loops: 2,
            parallel_probability: 0.25,
        }
    }
}

/// A random spanning tree plus random extra edges (some parallel) and
/// loops. All weights are drawn from `(0, 1]`.
pub fn random_multigraph<R: Rng + ?Sized>(rng: &mut R, shape: &CorpusShape) -> Graph {
    let n = rng.random_range(shape.min_vertices..=shape.max_vertices);
    let weight = |rng: &mut R| 1.0 - rng.random::<f64>();
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.push((u, v, weight(rng)));
    }
    let budget = shape.max_links.max(n - 1) - (n - 1);
    let extra = rng.random_range(0..=budget);
    for _ in 0..extra {
        let (u, v) = if rng.random_bool(shape.parallel_probability) {
            let (u, v, _) = edges[rng.random_range(0..edges.len())];
            (u, v)
        } else {
            let u = rng.random_range(0..n);
            let mut v = rng.random_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            (u, v)
        };
        edges.push((u, v, weight(rng)));
    }
    for _ in 0..rng.random_range(0..=shape.max_loops) {
        let v = rng.random_range(0..n);
        edges.push((v, v, weight(rng)));
    }
    Graph::new(n, edges).expect("spanning tree keeps the graph connected")
}

/// True when some vertex separates two others.
pub fn has_cutpoint(g: &Graph) -> bool {
    let n = g.order();
    (0..n).any(|j| {
        (0..n).filter(|&i| i != j).any(|i| {
            let row = g.cutpoint_row(j, i);
            (0..n).any(|k| k != i && k != j && row[k])
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn respects_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let shape = CorpusShape::default();
        for _ in 0..200 {
            let g = random_multigraph(&mut rng, &shape);
            assert!((2..=7).contains(&g.order()));
            assert!(g.link_count() <= 12);
            assert!(g.edges().iter().all(|e| e.weight > 0.0 && e.weight <= 1.0));
        }
    }

    #[test]
    fn cutpoint_detection() {
        assert!(has_cutpoint(&Graph::path(3).unwrap()));
        assert!(!has_cutpoint(&Graph::cycle(5).unwrap()));
        assert!(!has_cutpoint(&Graph::path(2).unwrap()));
    }
}
