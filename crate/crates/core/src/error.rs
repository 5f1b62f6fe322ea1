use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("contraction order {r} out of range for orders {p} and {q}")]
    ContractionOrder { r: usize, p: usize, q: usize },
    #[error("index {index} outside basis 1..={dim}")]
    IndexOutOfRange { index: u32, dim: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing moment for key {0:?}")]
    MissingMoment(Vec<usize>),
    #[error("covariance matrix is singular (smallest eigenvalue {0:e})")]
    SingularCovariance(f64),
    #[error("covariance matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPositiveSemidefinite(f64),
    #[error("negative fourth-moment excess {0:e}: covariance inconsistent with the chaos vector")]
    NegativeRadicand(f64),
    #[error("invalid covariance model for n = {n}: {msg}")]
    InvalidModel { n: usize, msg: String },
    #[error("series not certified summable: {0}")]
    NotSummable(String),
    #[error("quadrature grid too coarse: {0}")]
    GridTooCoarse(String),
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error("enumeration too large: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
