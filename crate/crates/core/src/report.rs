use std::fmt;

/// Which property a [`Violation`] breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    /// `s_ij·s_jk > s_ik·s_jj` beyond tolerance.
    TransitionInequality,
    /// Equality holds although `j` is not a cutpoint between `i` and `k`.
    FalseEquality,
    /// `j` is a cutpoint between `i` and `k` but equality fails.
    MissedEquality,
    Asymmetry,
    NonzeroDiagonal,
    NonPositive,
    TriangleInequality,
}

impl ViolationKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ViolationKind::TransitionInequality => "transition-inequality",
            ViolationKind::FalseEquality => "false-equality",
            ViolationKind::MissedEquality => "missed-equality",
            ViolationKind::Asymmetry => "asymmetry",
            ViolationKind::NonzeroDiagonal => "nonzero-diagonal",
            ViolationKind::NonPositive => "non-positive",
            ViolationKind::TriangleInequality => "triangle-inequality",
        }
    }
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One failed check. Vertex indices are 0-based; `k` is absent for
/// pairwise checks.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub i: usize,
    pub j: usize,
    pub k: Option<usize>,
    pub lhs: f64,
    pub rhs: f64,
    /// What the cutpoint oracle says the relation should be (equality
    /// expected). Always `false` for the metric-axiom checks.
    pub expected_equal: bool,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            Some(k) => write!(
                f,
                "{} at ({}, {}, {})",
                self.kind,
                self.i + 1,
                self.j + 1,
                k + 1
            )?,
            None => write!(f, "{} at ({}, {})", self.kind, self.i + 1, self.j + 1)?,
        }
        write!(
            f,
            ": lhs {:e}, rhs {:e}, expected equality: {}",
            self.lhs, self.rhs, self.expected_equal
        )
    }
}

/// Pass/fail evidence from one checker. Passes iff no violations.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }

    pub(crate) fn push(&mut self, v: Violation) {
        self.violations.push(v);
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return f.write_str("passed");
        }
        writeln!(f, "failed with {} violation(s)", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

/// `|a − b| ≤ max(tol·max(|a|, |b|), floor)`.
pub(crate) fn nearly_equal(a: f64, b: f64, tol: f64, floor: f64) -> bool {
    (a - b).abs() <= (tol * a.abs().max(b.abs())).max(floor)
}
