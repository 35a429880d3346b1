//! Distances on graph vertices: the logarithmic transform of transitional
//! measures, resistance distance, long-walk distance, and checkers for the
//! metric axioms and cutpoint additivity.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{self, SpectralData};
use crate::matrix::Matrix;
use crate::measures::{self, MeasureKind, TransitionalMeasure, DEFAULT_TOLERANCE};
use crate::report::{nearly_equal, ValidationReport, Violation, ViolationKind};

/// Relative tolerance for checks on long-walk values, which come out of an
/// extrapolated limit.
pub const LONG_WALK_TOLERANCE: f64 = 1e-6;
const ABSOLUTE_FLOOR: f64 = 1e-12;

/// How the long-walk limit is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LongWalkMethod {
    /// Richardson extrapolation of the defining limit.
    #[default]
    Limit,
    /// Experimental closed form through the para-Laplacian pseudoinverse.
    ClosedForm,
}

/// A named distance together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    Shortest,
    Resistance,
    Path {
        tau: f64,
    },
    Reliability,
    /// Logarithmic forest distance on the graph with edge weights scaled by `t`.
    Forest {
        t: f64,
    },
    Walk {
        t: f64,
    },
    LongWalk {
        method: LongWalkMethod,
    },
    LongWalkRescaled {
        method: LongWalkMethod,
    },
    /// A matrix that did not come from one of the pipelines.
    External,
}

impl Metric {
    pub const NAMES: [&'static str; 8] = [
        "shortest",
        "resistance",
        "path",
        "reliability",
        "forest",
        "walk",
        "longwalk",
        "longwalk-rescaled",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Shortest => "shortest",
            Metric::Resistance => "resistance",
            Metric::Path { .. } => "path",
            Metric::Reliability => "reliability",
            Metric::Forest { .. } => "forest",
            Metric::Walk { .. } => "walk",
            Metric::LongWalk { .. } => "longwalk",
            Metric::LongWalkRescaled { .. } => "longwalk-rescaled",
            Metric::External => "external",
        }
    }

    /// `(parameter name, value)` when the metric has one.
    pub fn parameter(&self) -> Option<(&'static str, f64)> {
        match *self {
            Metric::Path { tau } => Some(("tau", tau)),
            Metric::Forest { t } | Metric::Walk { t } => Some(("t", t)),
            _ => None,
        }
    }

    /// True for the metrics expected to be cutpoint additive on every graph.
    pub fn is_cutpoint_additive(&self) -> bool {
        !matches!(self, Metric::Shortest | Metric::External)
    }

    /// Tolerance appropriate to how the values are computed.
    pub fn default_tolerance(&self) -> f64 {
        match self {
            Metric::LongWalk { .. } | Metric::LongWalkRescaled { .. } => LONG_WALK_TOLERANCE,
            _ => DEFAULT_TOLERANCE,
        }
    }

    /// The transitional measure behind a logarithmic distance.
    pub fn measure(&self, g: &Graph) -> Option<Result<TransitionalMeasure>> {
        match *self {
            Metric::Path { tau } => Some(measures::path_accessibility(g, tau)),
            Metric::Reliability => Some(measures::connection_reliability(g)),
            Metric::Forest { t } => Some(g.scaled(t).and_then(|tg| measures::forest_matrix(&tg))),
            Metric::Walk { t } => Some(measures::walk_matrix(g, t)),
            _ => None,
        }
    }

    pub fn compute(&self, g: &Graph) -> Result<DistanceMatrix> {
        match *self {
            Metric::Shortest => Ok(g.shortest_path_lengths()),
            Metric::Resistance => resistance_distance(g),
            Metric::Path { tau } => path_distance(g, tau),
            Metric::Reliability => reliability_distance(g),
            Metric::Forest { t } => forest_distance(g, t),
            Metric::Walk { t } => walk_distance(g, t),
            Metric::LongWalk { method } => long_walk_distance_with(g, method),
            Metric::LongWalkRescaled { method } => rescaled_long_walk_distance_with(g, method),
            Metric::External => Err(Error::InvalidArgument(
                "external matrices cannot be recomputed from a graph".into(),
            )),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.parameter() {
            Some((p, v)) => write!(f, "{}({p}={v})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

/// Symmetric, zero-diagonal matrix of pairwise distances and the metric
/// that produced it. Metric properties are checked by
/// [`check_metric_axioms`], not assumed.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    matrix: Matrix,
    metric: Metric,
}

impl DistanceMatrix {
    pub fn new(matrix: Matrix, metric: Metric) -> Self {
        DistanceMatrix { matrix, metric }
    }

    /// Wraps an arbitrary candidate matrix.
    pub fn from_matrix(matrix: Matrix) -> Self {
        DistanceMatrix {
            matrix,
            metric: Metric::External,
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn order(&self) -> usize {
        self.matrix.order()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }
}

/// `d_ij = ½(ln s_ii + ln s_jj − ln s_ij − ln s_ji)`.
pub fn log_distance(s: &TransitionalMeasure) -> Result<DistanceMatrix> {
    let metric = match s.kind {
        MeasureKind::Path { tau } => Metric::Path { tau },
        MeasureKind::Reliability => Metric::Reliability,
        MeasureKind::Forest => Metric::Forest { t: 1.0 },
        MeasureKind::Walk { t } => Metric::Walk { t },
    };
    Ok(DistanceMatrix::new(log_distance_matrix(&s.matrix)?, metric))
}

pub fn log_distance_matrix(s: &Matrix) -> Result<Matrix> {
    let n = s.order();
    for i in 0..n {
        for j in 0..n {
            let v = s[(i, j)];
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::NonPositiveEntry {
                    i: i + 1,
                    j: j + 1,
                    value: v,
                });
            }
        }
    }
    let h = s.map(f64::ln);
    Ok(Matrix::from_fn(n, |i, j| {
        if i == j {
            0.0
        } else {
            0.5 * (h[(i, i)] + h[(j, j)] - h[(i, j)] - h[(j, i)])
        }
    }))
}

/// Path distance. The τ-accessibility is validated first and the distance
/// is refused when τ breaks the transition inequality or the bottleneck
/// identity.
pub fn path_distance(g: &Graph, tau: f64) -> Result<DistanceMatrix> {
    let s = measures::path_accessibility(g, tau)?;
    let report = measures::validate_transitional_measure(g, &s, DEFAULT_TOLERANCE);
    if !report.passed() {
        let first = &report.violations[0];
        return Err(Error::ParameterRejected(format!(
            "tau = {tau} does not give a transitional measure on this graph \
             ({} violation(s), first: {first})",
            report.violations.len()
        )));
    }
    log_distance(&s)
}

pub fn reliability_distance(g: &Graph) -> Result<DistanceMatrix> {
    log_distance(&measures::connection_reliability(g)?)
}

/// Logarithmic forest distance of `tG`, the graph with all edge weights
/// multiplied by `t`.
pub fn forest_distance(g: &Graph, t: f64) -> Result<DistanceMatrix> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::ParameterOutOfRange {
            name: "t",
            value: t,
            reason: "forest re-weighting must be positive".into(),
        });
    }
    let f = measures::forest_matrix(&g.scaled(t)?)?;
    Ok(DistanceMatrix::new(
        log_distance_matrix(&f.matrix)?,
        Metric::Forest { t },
    ))
}

pub fn walk_distance(g: &Graph, t: f64) -> Result<DistanceMatrix> {
    log_distance(&measures::walk_matrix(g, t)?)
}

/// Effective resistance, `L⁺_ii + L⁺_jj − 2·L⁺_ij`.
pub fn resistance_distance(g: &Graph) -> Result<DistanceMatrix> {
    let n = g.order();
    let pinv = linalg::symmetric_pseudoinverse(&g.laplacian(), &vec![1.0; n])?;
    let d = Matrix::from_fn(n, |i, j| {
        if i == j {
            0.0
        } else {
            pinv[(i, i)] + pinv[(j, j)] - 2.0 * pinv[(i, j)]
        }
    });
    Ok(DistanceMatrix::new(d, Metric::Resistance))
}

/// Settings for the long-walk extrapolation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LongWalkOptions {
    /// First level: `t = ρ⁻¹(1 − 2^−first_level)`.
    pub first_level: u32,
    pub max_levels: u32,
    /// Stop when successive extrapolants agree to this relative tolerance.
    pub rel_tol: f64,
}

impl Default for LongWalkOptions {
    fn default() -> Self {
        LongWalkOptions {
            first_level: 1,
            max_levels: 40,
            rel_tol: 1e-8,
        }
    }
}

/// Evaluates the long-walk quotient
/// `[ln r_ii + ln r_jj − 2 ln r_ij] / (nρ²(ρ⁻¹ − t))` at `t = (1 − ε)/ρ`.
///
/// Writing `u` for the unit Perron vector, `R_t = u·uᵀ/ε + G` with
/// `G = (I − tA + tρ·u·uᵀ)⁻¹ − u·uᵀ`, which stays well conditioned as
/// `ε → 0`. The divergent `ln(u_i u_j / ε)` parts cancel exactly, leaving
/// `ln1p(ε·G_ij/(u_i u_j))` terms.
#[derive(Debug, Clone)]
pub struct LongWalkQuotient {
    a: Matrix,
    spectral: SpectralData,
    unit: Vec<f64>,
}

impl LongWalkQuotient {
    pub fn new(g: &Graph) -> Result<Self> {
        let a = g.adjacency_matrix();
        let spectral = linalg::spectral_data(&a)?;
        let unit = spectral.unit_perron();
        Ok(LongWalkQuotient { a, spectral, unit })
    }

    pub fn spectral(&self) -> &SpectralData {
        &self.spectral
    }

    /// Quotient matrix at `ε = 1 − tρ`, zero on the diagonal.
    pub fn at(&self, eps: f64) -> Result<Matrix> {
        let n = self.a.order();
        let rho = self.spectral.rho;
        let t = (1.0 - eps) / rho;
        let u = &self.unit;
        let outer = Matrix::from_fn(n, |i, j| u[i] * u[j]);
        let shifted = Matrix::identity(n)
            .sub(&self.a.scaled(t))
            .add(&outer.scaled(t * rho));
        let g = linalg::invert(&shifted)?.sub(&outer);
        let rel = |i: usize, j: usize| (eps * g[(i, j)] / (u[i] * u[j])).ln_1p();
        let denom = n as f64 * rho * eps;
        Ok(Matrix::from_fn(n, |i, j| {
            if i == j {
                0.0
            } else {
                (rel(i, i) + rel(j, j) - rel(i, j) - rel(j, i)) / denom
            }
        }))
    }
}

/// Long-walk distance by Richardson extrapolation of the defining limit
/// over `ε_k = 2^−k`.
pub fn long_walk_distance(g: &Graph) -> Result<DistanceMatrix> {
    long_walk_distance_opts(g, LongWalkOptions::default())
}

pub fn long_walk_distance_with(g: &Graph, method: LongWalkMethod) -> Result<DistanceMatrix> {
    match method {
        LongWalkMethod::Limit => long_walk_distance(g),
        LongWalkMethod::ClosedForm => long_walk_distance_closed_form(g),
    }
}

pub fn long_walk_distance_opts(g: &Graph, opts: LongWalkOptions) -> Result<DistanceMatrix> {
    let quotient = LongWalkQuotient::new(g)?;
    let n = g.order();
    // tableau rows: extrapolants of increasing order for the current level
    let mut previous_row: Vec<Matrix> = Vec::new();
    let mut previous_best: Option<Matrix> = None;
    for level in 0..opts.max_levels {
        let eps = 0.5f64.powi((opts.first_level + level) as i32);
        let mut row = vec![quotient.at(eps)?];
        for order in 1..=previous_row.len() {
            let factor = 1.0 / ((1u64 << order) as f64 - 1.0);
            let last = &row[order - 1];
            let diff = last.sub(&previous_row[order - 1]);
            row.push(last.add(&diff.scaled(factor)));
        }
        let best = row.last().expect("row is never empty").clone();
        if let Some(prev) = &previous_best {
            let converged = (0..n).all(|i| {
                (0..n).all(|j| {
                    let (a, b) = (prev[(i, j)], best[(i, j)]);
                    (a - b).abs() <= opts.rel_tol * b.abs()
                })
            });
            if converged {
                return Ok(DistanceMatrix::new(
                    best,
                    Metric::LongWalk {
                        method: LongWalkMethod::Limit,
                    },
                ));
            }
        }
        previous_best = Some(best);
        previous_row = row;
    }
    let last = previous_best.expect("at least one level");
    let prev = &previous_row[previous_row.len().saturating_sub(2)];
    let (i, j) = (0, n - 1);
    Err(Error::ExtrapolationFailed {
        previous: prev[(i, j)],
        last: last[(i, j)],
    })
}

/// Experimental closed form. With `Ψ` the pseudoinverse of the
/// para-Laplacian `ρI − A` (kernel spanned by the Perron vector) and `u`
/// the unit Perron vector,
/// `d(i, j) = (Ψ_ii/u_i² + Ψ_jj/u_j² − 2Ψ_ij/(u_i u_j)) / n`.
///
/// Cross-checked against [`long_walk_distance`] in the test suite.
pub fn long_walk_distance_closed_form(g: &Graph) -> Result<DistanceMatrix> {
    let a = g.adjacency_matrix();
    let n = a.order();
    let spectral = linalg::spectral_data(&a)?;
    let u = spectral.unit_perron();
    let para = Matrix::identity(n).scaled(spectral.rho).sub(&a);
    let psi = linalg::symmetric_pseudoinverse(&para, &u)?;
    let w = |i: usize, j: usize| psi[(i, j)] / (u[i] * u[j]);
    let d = Matrix::from_fn(n, |i, j| {
        if i == j {
            0.0
        } else {
            (w(i, i) + w(j, j) - 2.0 * w(i, j)) / n as f64
        }
    });
    Ok(DistanceMatrix::new(
        d,
        Metric::LongWalk {
            method: LongWalkMethod::ClosedForm,
        },
    ))
}

/// `n·‖p‖₂²` with the Perron vector normalised to sum 1.
pub fn long_walk_rescaling_factor(g: &Graph) -> Result<f64> {
    let spectral = linalg::spectral_data(&g.adjacency_matrix())?;
    Ok(g.order() as f64 * spectral.perron_norm_sq())
}

pub fn rescaled_long_walk_distance(g: &Graph) -> Result<DistanceMatrix> {
    rescaled_long_walk_distance_with(g, LongWalkMethod::Limit)
}

pub fn rescaled_long_walk_distance_with(
    g: &Graph,
    method: LongWalkMethod,
) -> Result<DistanceMatrix> {
    let d = long_walk_distance_with(g, method)?;
    let factor = long_walk_rescaling_factor(g)?;
    Ok(DistanceMatrix::new(
        d.matrix.scaled(factor),
        Metric::LongWalkRescaled { method },
    ))
}

/// Symmetry, zero diagonal, positive off-diagonal entries and the triangle
/// inequality `d(i,k) ≤ (d(i,j) + d(j,k))·(1 + tol)`.
pub fn check_metric_axioms(d: &DistanceMatrix, tol: f64) -> ValidationReport {
    let m = &d.matrix;
    let n = m.order();
    let floor = ABSOLUTE_FLOOR * m.max_abs();
    let mut report = ValidationReport::default();
    let mut push = |kind, i, j, k, lhs, rhs| {
        report.push(Violation {
            kind,
            i,
            j,
            k,
            lhs,
            rhs,
            expected_equal: false,
        })
    };
    for i in 0..n {
        if m[(i, i)].abs() > floor || !m[(i, i)].is_finite() {
            push(ViolationKind::NonzeroDiagonal, i, i, None, m[(i, i)], 0.0);
        }
        for j in 0..n {
            if i == j {
                continue;
            }
            if !(m[(i, j)] > 0.0 && m[(i, j)].is_finite()) {
                push(ViolationKind::NonPositive, i, j, None, m[(i, j)], 0.0);
            }
            if i < j && !nearly_equal(m[(i, j)], m[(j, i)], tol, floor) {
                push(ViolationKind::Asymmetry, i, j, None, m[(i, j)], m[(j, i)]);
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                let via = m[(i, j)] + m[(j, k)];
                if m[(i, k)] > via * (1.0 + tol) + floor {
                    push(
                        ViolationKind::TriangleInequality,
                        i,
                        j,
                        Some(k),
                        via,
                        m[(i, k)],
                    );
                }
            }
        }
    }
    report
}

/// For all triples of distinct vertices, `d(i,j) + d(j,k) = d(i,k)` within
/// `tol·d(i,k)` must hold exactly when `j` is a cutpoint between `i` and
/// `k`. Both failure directions are reported.
pub fn check_cutpoint_additivity(g: &Graph, d: &DistanceMatrix, tol: f64) -> ValidationReport {
    let m = &d.matrix;
    let n = g.order();
    assert_eq!(
        m.order(),
        n,
        "distance matrix order does not match the graph"
    );
    let floor = ABSOLUTE_FLOOR * m.max_abs();
    let mut report = ValidationReport::default();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let cut = g.cutpoint_row(j, i);
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let lhs = m[(i, j)] + m[(j, k)];
                let rhs = m[(i, k)];
                let equal = (lhs - rhs).abs() <= (tol * rhs.abs()).max(floor);
                let kind = match (cut[k], equal) {
                    (true, false) => ViolationKind::MissedEquality,
                    (false, true) => ViolationKind::FalseEquality,
                    _ => continue,
                };
                report.push(Violation {
                    kind,
                    i,
                    j,
                    k: Some(k),
                    lhs,
                    rhs,
                    expected_equal: cut[k],
                });
            }
        }
    }
    report
}

/// Rescales so that the distances over `pairs` sum to `target`.
pub fn normalize_distances(
    d: &DistanceMatrix,
    pairs: &[(usize, usize)],
    target: f64,
) -> Result<DistanceMatrix> {
    if pairs.is_empty() {
        return Err(Error::InvalidArgument(
            "normalisation needs at least one pair".into(),
        ));
    }
    let n = d.order();
    let mut sum = 0.0;
    for &(u, v) in pairs {
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { id: x + 1, n });
            }
        }
        sum += d.get(u, v);
    }
    if !(sum > 0.0 && sum.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "cannot normalise: distances over the pairs sum to {sum}"
        )));
    }
    if !target.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "invalid normalisation target {target}"
        )));
    }
    Ok(DistanceMatrix::new(d.matrix.scaled(target / sum), d.metric))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LN2: f64 = std::f64::consts::LN_2;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn log_distance_examples() {
        let d =
            log_distance(&measures::walk_matrix(&Graph::path(2).unwrap(), 0.5).unwrap()).unwrap();
        assert!(approx(d.get(0, 1), LN2, 1e-15));

        let d = log_distance(&measures::forest_matrix(&Graph::path(3).unwrap()).unwrap()).unwrap();
        assert!(approx(d.get(0, 1), 0.5 * 5f64.ln(), 1e-15));
        assert!(approx(d.get(0, 2), 5f64.ln(), 1e-15));
        assert!(approx(d.get(0, 1) + d.get(1, 2), d.get(0, 2), 1e-15));

        let constant = Matrix::from_fn(3, |_, _| 2.5);
        assert_eq!(log_distance_matrix(&constant).unwrap(), Matrix::zeros(3));
    }

    #[test]
    fn log_distance_rejects_non_positive_entries() {
        let s = Matrix::from_rows(&[[1.0, -0.1], [-0.1, 1.0]]).unwrap();
        assert!(matches!(
            log_distance_matrix(&s),
            Err(Error::NonPositiveEntry { .. })
        ));
    }

    #[test]
    fn composed_distances() {
        let p2 = Graph::new(2, [(0, 1, 0.5)]).unwrap();
        assert!(approx(
            reliability_distance(&p2).unwrap().get(0, 1),
            LN2,
            1e-15
        ));

        let w = walk_distance(&Graph::path(3).unwrap(), 0.5).unwrap();
        assert!(approx(w.get(0, 1), 0.5 * 3f64.ln(), 1e-15));
        assert!(approx(w.get(0, 2), 3f64.ln(), 1e-15));

        let f = forest_distance(&Graph::path(2).unwrap(), 1.0).unwrap();
        assert!(approx(f.get(0, 1), LN2, 1e-15));
        assert_eq!(f.metric(), Metric::Forest { t: 1.0 });
    }

    #[test]
    fn path_distance_refuses_invalid_tau() {
        let k3 = Graph::complete(3).unwrap();
        assert!(path_distance(&k3, 0.5).is_ok());
        assert!(matches!(
            path_distance(&k3, 0.7),
            Err(Error::ParameterRejected(_))
        ));
    }

    #[test]
    fn resistance_examples() {
        assert!(approx(
            resistance_distance(&Graph::path(3).unwrap())
                .unwrap()
                .get(0, 2),
            2.0,
            1e-12
        ));
        assert!(approx(
            resistance_distance(&Graph::complete(3).unwrap())
                .unwrap()
                .get(0, 1),
            2.0 / 3.0,
            1e-12
        ));
        let star = Graph::star(4).unwrap();
        let r = resistance_distance(&star).unwrap();
        assert!(
            r.matrix()
                .max_abs_diff(star.shortest_path_lengths().matrix())
                < 1e-12
        );
    }

    #[test]
    fn long_walk_on_p2_is_one() {
        let d = long_walk_distance(&Graph::path(2).unwrap()).unwrap();
        assert!(approx(d.get(0, 1), 1.0, 1e-9), "{}", d.get(0, 1));
    }

    #[test]
    fn long_walk_is_additive_on_p3() {
        let d = long_walk_distance(&Graph::path(3).unwrap()).unwrap();
        assert!(approx(
            d.get(0, 1) + d.get(1, 2),
            d.get(0, 2),
            1e-6 * d.get(0, 2)
        ));
    }

    #[test]
    fn long_walk_symmetric_on_k3() {
        let d = long_walk_distance(&Graph::complete(3).unwrap()).unwrap();
        let x = d.get(0, 1);
        for (i, j) in [(0, 2), (1, 2), (1, 0)] {
            assert!(approx(d.get(i, j), x, 1e-9 * x));
        }
    }

    #[test]
    fn long_walk_quotient_matches_direct_evaluation() {
        // direct: logs of the walk matrix at moderate t
        let g = Graph::new(
            4,
            [
                (0, 1, 0.3),
                (1, 2, 1.0),
                (2, 0, 0.7),
                (2, 3, 0.4),
                (3, 3, 0.2),
            ],
        )
        .unwrap();
        let q = LongWalkQuotient::new(&g).unwrap();
        let rho = q.spectral().rho;
        for eps in [0.5, 0.1, 0.01] {
            let t = (1.0 - eps) / rho;
            let r = measures::walk_matrix(&g, t).unwrap().matrix;
            let stable = q.at(eps).unwrap();
            for i in 0..4 {
                for j in 0..4 {
                    if i == j {
                        continue;
                    }
                    let direct = (r[(i, i)].ln() + r[(j, j)].ln() - 2.0 * r[(i, j)].ln())
                        / (4.0 * rho * rho * (1.0 / rho - t));
                    assert!(
                        approx(stable[(i, j)], direct, 1e-9 * direct),
                        "{eps} {i} {j}"
                    );
                }
            }
        }
    }

    #[test]
    fn closed_form_agrees_with_limit() {
        for g in [
            Graph::path(2).unwrap(),
            Graph::path(4).unwrap(),
            Graph::star(3).unwrap(),
            Graph::diamond().unwrap(),
            Graph::new(
                4,
                [
                    (0, 1, 0.3),
                    (1, 2, 1.0),
                    (2, 0, 0.7),
                    (2, 3, 0.4),
                    (3, 3, 0.2),
                ],
            )
            .unwrap(),
        ] {
            let limit = long_walk_distance(&g).unwrap();
            let closed = long_walk_distance_closed_form(&g).unwrap();
            let scale = limit.matrix().max_abs();
            assert!(limit.matrix().max_abs_diff(closed.matrix()) < 1e-8 * scale);
        }
    }

    #[test]
    fn rescaling_factor() {
        for g in [Graph::path(2).unwrap(), Graph::complete(3).unwrap()] {
            assert!(approx(long_walk_rescaling_factor(&g).unwrap(), 1.0, 1e-12));
            let d = long_walk_distance(&g).unwrap();
            let r = rescaled_long_walk_distance(&g).unwrap();
            assert!(d.matrix().max_abs_diff(r.matrix()) < 1e-12);
        }
        let star = long_walk_rescaling_factor(&Graph::star(3).unwrap()).unwrap();
        assert!(star > 1.0, "{star}");
    }

    #[test]
    fn metric_axiom_checker() {
        let asym =
            DistanceMatrix::from_matrix(Matrix::from_rows(&[[0.0, 1.0], [3.0, 0.0]]).unwrap());
        let report = check_metric_axioms(&asym, 1e-9);
        assert_eq!(report.count(ViolationKind::Asymmetry), 1);

        let tri = DistanceMatrix::from_matrix(
            Matrix::from_rows(&[[0.0, 1.0, 3.0], [1.0, 0.0, 1.0], [3.0, 1.0, 0.0]]).unwrap(),
        );
        let report = check_metric_axioms(&tri, 1e-9);
        assert!(report.count(ViolationKind::TriangleInequality) > 0);
        assert_eq!(report.count(ViolationKind::Asymmetry), 0);

        let walk = walk_distance(&Graph::diamond().unwrap(), 0.2).unwrap();
        assert!(check_metric_axioms(&walk, 1e-9).passed());
    }

    #[test]
    fn cutpoint_additivity_checker() {
        let p4 = Graph::path(4).unwrap();
        let f = forest_distance(&p4, 1.0).unwrap();
        assert!(check_cutpoint_additivity(&p4, &f, 1e-9).passed());
        assert!(approx(f.get(0, 1) + f.get(1, 3), f.get(0, 3), 1e-12));

        let c4 = Graph::cycle(4).unwrap();
        let report = check_cutpoint_additivity(&c4, &c4.shortest_path_lengths(), 1e-9);
        assert!(report
            .violations
            .iter()
            .any(|v| (v.i, v.j, v.k) == (0, 1, Some(2)) && v.kind == ViolationKind::FalseEquality));
    }

    #[test]
    fn normalisation() {
        let p4 = Graph::path(4).unwrap();
        let pairs = [(0, 1), (1, 2), (2, 3)];
        let w = normalize_distances(&walk_distance(&p4, 0.4).unwrap(), &pairs, 3.0).unwrap();
        assert!(approx(w.get(0, 3), 3.0, 1e-12));

        let s = p4.shortest_path_lengths();
        assert_eq!(normalize_distances(&s, &pairs, 3.0).unwrap(), s);

        assert!(normalize_distances(&s, &[], 3.0).is_err());
        assert!(normalize_distances(&s, &[(0, 0)], 3.0).is_err());
        assert!(normalize_distances(&s, &[(0, 9)], 3.0).is_err());
    }
}
