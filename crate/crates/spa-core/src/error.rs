use thiserror::Error;

pub type Result<T> = std::result::Result<T, SpaError>;

#[derive(Debug, Error)]
pub enum SpaError {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition was violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error(
        "quadrature did not converge: error estimate {error_estimate:.3e} \
         above tolerance {tolerance:.3e} after {intervals} subintervals"
    )]
    QuadratureNonConvergence {
        error_estimate: f64,
        tolerance: f64,
        intervals: usize,
    },

    /// Kernel derivative order outside the supported range.
    #[error("unsupported derivative order {0} (maximum 6)")]
    UnsupportedOrder(usize),

    #[error("eigensolver failure: {0}")]
    Eigensolver(String),

    /// Malformed data file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Data file parsed but its contents fail a physical sanity check.
    #[error("data error: {0}")]
    Data(String),

    /// Mismatched table indexing between pipeline stages.
    #[error("internal consistency error: {0}")]
    Inconsistent(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
