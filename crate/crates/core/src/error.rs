use thiserror::Error;

/// Errors raised by the library.
///
/// Validation failures carry the magnitude of the violated invariant so a
/// caller can report how far off an input was, not just that it failed.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("matrix is not Hermitian: max |A - A^H| = {deviation:e}")]
    NonHermitian { deviation: f64 },

    #[error("trace is {trace}, not 1 (deviation {deviation:e})")]
    TraceNotOne { trace: f64, deviation: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),

    #[error("invalid norm order p = {0}; need p >= 1 or infinity")]
    InvalidNorm(f64),

    #[error("unsupported basis convention: {0}")]
    UnsupportedConvention(String),

    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),

    #[error("parameter {name} = {value} is outside its valid range ({range})")]
    ParameterRange {
        name: String,
        value: f64,
        range: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
