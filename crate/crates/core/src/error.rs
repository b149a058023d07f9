use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("qubit count {0} is outside the supported range 1..=64")]
    QubitCount(usize),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("{what} index {index} out of range (must be < {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("operator is not Hermitian: {0}")]
    NotHermitian(String),

    #[error("matrix is not unitary (residual {0:e})")]
    NotUnitary(f64),

    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;
