//! Transitional measures: path τ-accessibility, connection reliability,
//! the matrix of forests and the walk matrix, plus the checker for the
//! transition inequality and the graph bottleneck identity.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{self, Lu};
use crate::matrix::Matrix;
use crate::report::{nearly_equal, ValidationReport, Violation, ViolationKind};

/// Default cap on the vertex count for exhaustive path enumeration.
pub const DEFAULT_PATH_VERTEX_CAP: usize = 12;
/// Cap on non-loop edges for the union-mask inclusion–exclusion.
pub const RELIABILITY_EDGE_CAP: usize = 20;
/// Relative tolerance for equality tests on products of measure entries.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Absolute floor for equality tests, relative to the measure's scale.
pub const ABSOLUTE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MeasureKind {
    Path { tau: f64 },
    Reliability,
    Forest,
    Walk { t: f64 },
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureKind::Path { tau } => write!(f, "path accessibility (tau = {tau})"),
            MeasureKind::Reliability => f.write_str("connection reliability"),
            MeasureKind::Forest => f.write_str("matrix of forests"),
            MeasureKind::Walk { t } => write!(f, "walk matrix (t = {t})"),
        }
    }
}

/// A matrix `S` of pairwise accessibilities tagged with how it was built.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionalMeasure {
    pub kind: MeasureKind,
    pub matrix: Matrix,
}

/// Path τ-accessibility: `s_ij` sums `τ^len · w(P)` over all simple `i → j`
/// paths, parallel edges giving distinct paths; `s_ii = 1`.
pub fn path_accessibility(g: &Graph, tau: f64) -> Result<TransitionalMeasure> {
    path_accessibility_capped(g, tau, DEFAULT_PATH_VERTEX_CAP)
}

pub fn path_accessibility_capped(g: &Graph, tau: f64, cap: usize) -> Result<TransitionalMeasure> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::ParameterOutOfRange {
            name: "tau",
            value: tau,
            reason: "must be a positive real".into(),
        });
    }
    check_vertex_cap(g, cap)?;
    let n = g.order();
    let mut s = Matrix::zeros(n);
    let mut visited = vec![false; n];
    for source in 0..n {
        let mut sums = vec![0.0; n];
        visited[source] = true;
        accumulate_paths(g, tau, source, 0, 1.0, &mut visited, &mut sums);
        visited[source] = false;
        sums[source] = 1.0;
        for (j, v) in sums.into_iter().enumerate() {
            s[(source, j)] = v;
        }
    }
    Ok(TransitionalMeasure {
        kind: MeasureKind::Path { tau },
        matrix: s,
    })
}

// Depth-first over simple paths; each path is credited to its endpoint
// when it is first reached.
fn accumulate_paths(
    g: &Graph,
    tau: f64,
    at: usize,
    len: i32,
    weight: f64,
    visited: &mut [bool],
    sums: &mut [f64],
) {
    for &(next, edge) in g.incidences(at) {
        if visited[next] {
            continue;
        }
        let w = weight * g.edges()[edge].weight;
        sums[next] += tau.powi(len + 1) * w;
        visited[next] = true;
        accumulate_paths(g, tau, next, len + 1, w, visited, sums);
        visited[next] = false;
    }
}

fn check_vertex_cap(g: &Graph, cap: usize) -> Result<()> {
    if g.order() > cap {
        return Err(Error::CapExceeded {
            what: "vertex count",
            actual: g.order(),
            cap,
        });
    }
    Ok(())
}

/// Connection reliability: the probability that some `i`–`j` path
/// survives when each edge survives independently with probability equal
/// to its weight.
///
/// Evaluated by inclusion–exclusion over the simple paths, where the joint
/// survival of a family of paths is the weight of the union of their edge
/// sets. Terms are grouped by that union: the signed count of path
/// families for each union mask is accumulated path by path, so the
/// exponential sum over families is carried out exactly without listing
/// the families one by one.
pub fn connection_reliability(g: &Graph) -> Result<TransitionalMeasure> {
    for e in g.edges() {
        if !(e.weight > 0.0 && e.weight <= 1.0) {
            return Err(Error::ParameterOutOfRange {
                name: "edge weight",
                value: e.weight,
                reason: format!("edge {}-{} must have weight in (0, 1]", e.u + 1, e.v + 1),
            });
        }
    }
    check_vertex_cap(g, DEFAULT_PATH_VERTEX_CAP)?;
    let m = g.link_count();
    if m > RELIABILITY_EDGE_CAP {
        return Err(Error::CapExceeded {
            what: "edge count",
            actual: m,
            cap: RELIABILITY_EDGE_CAP,
        });
    }

    // bit positions for non-loop edges
    let mut bit = vec![usize::MAX; g.edges().len()];
    let mut bit_weight = Vec::with_capacity(m);
    for (idx, e) in g.edges().iter().enumerate().filter(|(_, e)| !e.is_loop()) {
        bit[idx] = bit_weight.len();
        bit_weight.push(e.weight);
    }

    let n = g.order();
    let mut p = Matrix::identity(n);
    let mut inex = UnionInclusionExclusion::new(m);
    for i in 0..n {
        for j in i + 1..n {
            inex.clear();
            let mut visited = vec![false; n];
            visited[i] = true;
            for_each_path_mask(g, &bit, i, j, 0, &mut visited, &mut |mask| {
                inex.add_path(mask)
            });
            let value = inex.evaluate(&bit_weight);
            p[(i, j)] = value;
            p[(j, i)] = value;
        }
    }
    Ok(TransitionalMeasure {
        kind: MeasureKind::Reliability,
        matrix: p,
    })
}

fn for_each_path_mask(
    g: &Graph,
    bit: &[usize],
    at: usize,
    target: usize,
    mask: u32,
    visited: &mut [bool],
    f: &mut impl FnMut(u32),
) {
    for &(next, edge) in g.incidences(at) {
        if visited[next] {
            continue;
        }
        let mask = mask | (1u32 << bit[edge]);
        if next == target {
            f(mask);
            continue;
        }
        visited[next] = true;
        for_each_path_mask(g, bit, next, target, mask, visited, f);
        visited[next] = false;
    }
}

/// Signed counts `c[U] = Σ_{families F, ∪F = U} (−1)^{|F|+1}` over the
/// nonempty families of paths added so far.
struct UnionInclusionExclusion {
    coef: Vec<i64>,
    listed: Vec<bool>,
    active: Vec<u32>,
    pending: Vec<(u32, i64)>,
}

impl UnionInclusionExclusion {
    fn new(edges: usize) -> Self {
        let size = 1usize << edges;
        UnionInclusionExclusion {
            coef: vec![0; size],
            listed: vec![false; size],
            active: Vec::new(),
            pending: Vec::new(),
        }
    }

    fn clear(&mut self) {
        for &mask in &self.active {
            self.coef[mask as usize] = 0;
            self.listed[mask as usize] = false;
        }
        self.active.clear();
    }

    fn add_path(&mut self, path: u32) {
        // families containing the new path: {P} alone, and F ∪ {P} for each
        // earlier family F with its sign flipped
        self.pending.clear();
        self.pending.push((path, 1));
        for &mask in &self.active {
            let c = self.coef[mask as usize];
            if c != 0 {
                self.pending.push((mask | path, -c));
            }
        }
        for &(mask, delta) in &self.pending {
            let slot = &mut self.coef[mask as usize];
            *slot = slot
                .checked_add(delta)
                .expect("inclusion-exclusion coefficient overflow");
            if !self.listed[mask as usize] {
                self.listed[mask as usize] = true;
                self.active.push(mask);
            }
        }
    }

    fn evaluate(&self, weights: &[f64]) -> f64 {
        let mut sum = 0.0;
        for &mask in &self.active {
            let c = self.coef[mask as usize];
            if c == 0 {
                continue;
            }
            let mut w = 1.0;
            let mut bits = mask;
            while bits != 0 {
                w *= weights[bits.trailing_zeros() as usize];
                bits &= bits - 1;
            }
            sum += c as f64 * w;
        }
        sum
    }
}

/// Matrix of forests `F = det(I + L)·(I + L)⁻¹`.
pub fn forest_matrix(g: &Graph) -> Result<TransitionalMeasure> {
    let n = g.order();
    let m = Matrix::identity(n).add(&g.laplacian());
    let f = Lu::factor(&m).determinant();
    let q = linalg::invert(&m)?;
    Ok(TransitionalMeasure {
        kind: MeasureKind::Forest,
        matrix: q.scaled(f),
    })
}

/// Walk matrix `R_t = (I − tA)⁻¹` for `0 < t < 1/ρ`.
pub fn walk_matrix(g: &Graph, t: f64) -> Result<TransitionalMeasure> {
    let a = g.adjacency_matrix();
    let rho = linalg::spectral_data(&a)?.rho;
    check_walk_parameter(t, rho)?;
    let n = g.order();
    let r = linalg::invert(&Matrix::identity(n).sub(&a.scaled(t)))?;
    Ok(TransitionalMeasure {
        kind: MeasureKind::Walk { t },
        matrix: r,
    })
}

pub(crate) fn check_walk_parameter(t: f64, rho: f64) -> Result<()> {
    if !(t.is_finite() && t > 0.0 && t * rho < 1.0) {
        return Err(Error::ParameterOutOfRange {
            name: "t",
            value: t,
            reason: format!("need 0 < t < 1/rho = {}", 1.0 / rho),
        });
    }
    Ok(())
}

/// Checks `s_ij·s_jk ≤ s_ik·s_jj` for every ordered triple, with equality
/// (within `tol`) exactly when `j` is a cutpoint between `i` and `k`.
///
/// Triples with repeated vertices are included: for `i = k ≠ j` the trivial
/// path avoids `j`, so `s_ij·s_ji < s_ii·s_jj` must be strict.
pub fn validate_transitional_measure(
    g: &Graph,
    s: &TransitionalMeasure,
    tol: f64,
) -> ValidationReport {
    validate_measure_matrix(g, &s.matrix, tol)
}

pub fn validate_measure_matrix(g: &Graph, s: &Matrix, tol: f64) -> ValidationReport {
    let n = g.order();
    assert_eq!(s.order(), n, "measure order does not match the graph");
    let mut report = ValidationReport::default();
    for i in 0..n {
        for j in 0..n {
            if s[(i, j)] <= 0.0 || !s[(i, j)].is_finite() {
                report.push(Violation {
                    kind: ViolationKind::NonPositive,
                    i,
                    j,
                    k: None,
                    lhs: s[(i, j)],
                    rhs: 0.0,
                    expected_equal: false,
                });
            }
        }
    }
    if !report.passed() {
        return report;
    }
    let scale = s.max_abs();
    let floor = ABSOLUTE_FLOOR * scale * scale;
    for i in 0..n {
        for j in 0..n {
            let cut = g.cutpoint_row(j, i);
            for k in 0..n {
                let lhs = s[(i, j)] * s[(j, k)];
                let rhs = s[(i, k)] * s[(j, j)];
                let expected_equal = cut[k];
                let kind = if lhs > rhs * (1.0 + tol) + floor {
                    Some(ViolationKind::TransitionInequality)
                } else {
                    match (expected_equal, nearly_equal(lhs, rhs, tol, floor)) {
                        (true, false) => Some(ViolationKind::MissedEquality),
                        (false, true) => Some(ViolationKind::FalseEquality),
                        _ => None,
                    }
                };
                if let Some(kind) = kind {
                    report.push(Violation {
                        kind,
                        i,
                        j,
                        k: Some(k),
                        lhs,
                        rhs,
                        expected_equal,
                    });
                }
            }
        }
    }
    report
}

pub const DEFAULT_TAU_PRECISION: f64 = 1e-6;
const MAX_DOUBLINGS: usize = 64;
const MAX_RESTARTS: usize = 8;

/// Largest τ (to within `precision`) for which path τ-accessibility passes
/// [`validate_transitional_measure`] at the default tolerance.
///
/// Bisection assumes the pass/fail outcome is monotone in τ. The result is
/// re-validated on a grid below it; a failure there restarts the search
/// beneath the failing point.
pub fn find_tau_threshold(g: &Graph, precision: f64) -> Result<f64> {
    if !(precision.is_finite() && precision > 0.0) {
        return Err(Error::ParameterOutOfRange {
            name: "precision",
            value: precision,
            reason: "must be positive".into(),
        });
    }
    let passes = |tau: f64| -> Result<bool> {
        Ok(
            validate_transitional_measure(g, &path_accessibility(g, tau)?, DEFAULT_TOLERANCE)
                .passed(),
        )
    };
    let rho = linalg::spectral_data(&g.adjacency_matrix())?.rho;

    let (mut lo, mut hi) = (0.0, 1.0 / rho);
    if passes(hi)? {
        lo = hi;
        let mut doublings = 0;
        loop {
            hi = 2.0 * lo;
            if !passes(hi)? {
                break;
            }
            lo = hi;
            doublings += 1;
            if doublings == MAX_DOUBLINGS {
                return Err(Error::ParameterRejected(format!(
                    "path accessibility still valid at tau = {hi}; no threshold found"
                )));
            }
        }
    }

    for _ in 0..MAX_RESTARTS {
        while lo == 0.0 || hi - lo > precision {
            let mid = 0.5 * (lo + hi);
            if mid <= 0.0 {
                return Err(Error::ParameterRejected(
                    "no valid tau found above zero".into(),
                ));
            }
            if passes(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut failure = None;
        for step in 1..8 {
            let tau = lo * step as f64 / 8.0;
            if !passes(tau)? {
                failure = Some(tau);
                break;
            }
        }
        match failure {
            None => return Ok(lo),
            Some(tau) => {
                lo = 0.0;
                hi = tau;
            }
        }
    }
    Err(Error::ParameterRejected(
        "path accessibility validity is not monotone in tau; threshold search gave up".into(),
    ))
}
