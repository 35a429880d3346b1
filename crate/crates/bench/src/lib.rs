//! Fixture graphs shared by the benchmarks.

use cutmetrics::Graph;

/// `rungs × 2` ladder with slightly uneven weights, so no two entries of a
/// measure coincide by symmetry.
pub fn ladder(rungs: usize) -> Graph {
    let mut edges = Vec::new();
    for r in 0..rungs {
        let (a, b) = (2 * r, 2 * r + 1);
        edges.push((a, b, 0.5 + 0.03 * r as f64));
        if r + 1 < rungs {
            edges.push((a, a + 2, 0.9));
            edges.push((b, b + 2, 0.7));
        }
    }
    Graph::new(2 * rungs, edges).expect("ladder is connected")
}

/// Ladder with a pendant path hanging off one corner: plenty of cutpoints.
pub fn ladder_with_tail(rungs: usize, tail: usize) -> Graph {
    let base = ladder(rungs);
    let n = base.order();
    let mut edges: Vec<_> = base.edges().iter().map(|e| (e.u, e.v, e.weight)).collect();
    for k in 0..tail {
        let from = if k == 0 { 0 } else { n + k - 1 };
        edges.push((from, n + k, 0.8));
    }
    Graph::new(n + tail, edges).expect("tail keeps the graph connected")
}
