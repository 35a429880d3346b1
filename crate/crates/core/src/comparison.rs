//! Side-by-side comparison of metrics under a common normalisation, and the
//! planar picture of four vertices used to visualise them.

use crate::distances::{normalize_distances, DistanceMatrix, Metric};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub metric: Metric,
    /// Normalised distances.
    pub distances: DistanceMatrix,
}

/// Computes every metric, normalises each so the distances over `pairs`
/// sum to `target`, and orders rows by descending distance between the
/// first vertex of the first pair and the last vertex of the last pair.
pub fn compare(
    g: &Graph,
    metrics: &[Metric],
    pairs: &[(usize, usize)],
    target: f64,
) -> Result<Vec<ComparisonRow>> {
    if metrics.is_empty() {
        return Err(Error::InvalidArgument("no metrics to compare".into()));
    }
    let (first, last) = match (pairs.first(), pairs.last()) {
        (Some(&(a, _)), Some(&(_, b))) => (a, b),
        _ => {
            return Err(Error::InvalidArgument(
                "normalisation needs at least one pair".into(),
            ))
        }
    };
    let mut rows = Vec::with_capacity(metrics.len());
    for metric in metrics {
        let d = metric.compute(g)?;
        rows.push(ComparisonRow {
            metric: *metric,
            distances: normalize_distances(&d, pairs, target)?,
        });
    }
    // stable: ties keep the order the metrics were given in
    rows.sort_by(|a, b| {
        b.distances
            .get(first, last)
            .total_cmp(&a.distances.get(first, last))
    });
    Ok(rows)
}

/// Planar placement of four vertices `v1..v4` as a symmetric trapezoid:
/// `v2`, `v3` on the x-axis `d(2,3)` apart, `v1`, `v4` at height `h`
/// `d(1,4)` apart, so that `|v1 v2| = d(1,2)` and `|v3 v4| = d(3,4)`.
///
/// Only `d(1,4)`, `d(2,3)`, `d(1,2)` and `d(3,4)` are realised; the
/// diagonals are not constrained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trapezoid {
    pub points: [(f64, f64); 4],
    pub h: f64,
}

pub fn trapezoid(d: &DistanceMatrix, vertices: [usize; 4], tol: f64) -> Result<Trapezoid> {
    let n = d.order();
    if let Some(&v) = vertices.iter().find(|&&v| v >= n) {
        return Err(Error::VertexOutOfRange { id: v + 1, n });
    }
    let [a, b, c, e] = vertices;
    let (d12, d34) = (d.get(a, b), d.get(c, e));
    if (d12 - d34).abs() > tol * d12.abs().max(d34.abs()) {
        return Err(Error::InvalidArgument(format!(
            "trapezoid needs d({},{}) = d({},{}), got {d12} and {d34}",
            a + 1,
            b + 1,
            c + 1,
            e + 1
        )));
    }
    let side = 0.5 * (d12 + d34);
    let (d14, d23) = (d.get(a, e), d.get(b, c));
    let offset = 0.5 * (d14 - d23);
    // collinear within tolerance: snap rather than take sqrt of rounding noise
    let gap = side - offset.abs();
    let h = if gap <= tol * side {
        0.0
    } else {
        (gap * (side + offset.abs())).sqrt()
    };
    Ok(Trapezoid {
        points: [
            (-0.5 * d14, h),
            (-0.5 * d23, 0.0),
            (0.5 * d23, 0.0),
            (0.5 * d14, h),
        ],
        h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(p: (f64, f64), q: (f64, f64)) -> f64 {
        ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt()
    }

    #[test]
    fn shortest_path_on_p4_is_flat() {
        let p4 = Graph::path(4).unwrap();
        let t = trapezoid(&p4.shortest_path_lengths(), [0, 1, 2, 3], 1e-9).unwrap();
        assert_eq!(t.h, 0.0);
        assert_eq!(t.points[0], (-1.5, 0.0));
    }

    #[test]
    fn cycle_gives_a_proper_trapezoid() {
        let c4 = Graph::cycle(4).unwrap();
        let d = c4.shortest_path_lengths();
        let t = trapezoid(&d, [0, 1, 2, 3], 1e-9).unwrap();
        assert!(t.h > 0.0);
        let p = t.points;
        assert!((dist(p[0], p[3]) - d.get(0, 3)).abs() < 1e-12);
        assert!((dist(p[1], p[2]) - d.get(1, 2)).abs() < 1e-12);
        assert!((dist(p[0], p[1]) - d.get(0, 1)).abs() < 1e-12);
        assert!((dist(p[2], p[3]) - d.get(2, 3)).abs() < 1e-12);
    }

    #[test]
    fn asymmetric_sides_are_rejected() {
        let g = Graph::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 0.2)]).unwrap();
        let d = crate::distances::resistance_distance(&g).unwrap();
        assert!(trapezoid(&d, [0, 1, 2, 3], 1e-9).is_err());
    }

    #[test]
    fn compare_orders_rows_and_rejects_empty_input() {
        let c4 = Graph::cycle(4).unwrap();
        let pairs = [(0, 1), (1, 2), (2, 3)];
        let rows = compare(
            &c4,
            &[Metric::Shortest, Metric::Walk { t: 0.4 }],
            &pairs,
            3.0,
        )
        .unwrap();
        assert!(rows[0].distances.get(0, 3) >= rows[1].distances.get(0, 3));
        for r in &rows {
            let s: f64 = pairs.iter().map(|&(u, v)| r.distances.get(u, v)).sum();
            assert!((s - 3.0).abs() < 1e-12);
        }
        assert!(compare(&c4, &[], &pairs, 3.0).is_err());
        assert!(compare(&c4, &[Metric::Shortest], &[], 3.0).is_err());
    }
}
