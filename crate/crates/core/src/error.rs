use thiserror::Error;

/// Errors produced by graph construction, the numeric kernel and the
/// distance pipelines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("edge {u}-{v} has non-positive or non-finite weight {weight}")]
    InvalidWeight { u: usize, v: usize, weight: f64 },

    #[error("vertex id {id} out of range 1..={n}")]
    VertexOutOfRange { id: usize, n: usize },

    #[error("graph must have at least 2 vertices, got {0}")]
    TooFewVertices(usize),

    #[error("graph is disconnected: vertex {0} is unreachable from vertex 1")]
    Disconnected(usize),

    #[error("matrix is singular or ill-conditioned (condition estimate {condition:e})")]
    Singular { condition: f64 },

    #[error("matrix dimension mismatch: expected order {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("power iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("kernel vector is not in the kernel (residual {residual:e})")]
    KernelMismatch { residual: f64 },

    #[error("enumeration cap exceeded: {what} is {actual}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        actual: usize,
        cap: usize,
    },

    #[error("parameter {name} = {value} is out of range: {reason}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        reason: String,
    },

    #[error("{0}")]
    ParameterRejected(String),

    #[error("measure entry ({i}, {j}) = {value} is not strictly positive")]
    NonPositiveEntry { i: usize, j: usize, value: f64 },

    #[error("long-walk extrapolation did not converge: last iterates {previous} and {last}")]
    ExtrapolationFailed { previous: f64, last: f64 },

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
