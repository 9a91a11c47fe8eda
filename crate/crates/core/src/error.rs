use thiserror::Error;

/// Failures raised by the symbolic engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("degree error: {0}")]
    Degree(String),

    #[error("mixed bidegree: {0}")]
    Bidegree(String),

    #[error("unsupported degree {0}: only forms of degree <= {1} are supported here")]
    UnsupportedDegree(usize, usize),

    #[error("metric is degenerate: {0}")]
    Nondegeneracy(String),

    #[error("argument error: {0}")]
    Argument(String),

    #[error("foliation error: {0}")]
    Foliation(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An internal identity that the construction guarantees did not hold.
    #[error("construction soundness violated: {0}")]
    Soundness(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
