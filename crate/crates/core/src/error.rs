use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("grid resolves degree {grid_degree} but degree {required} is required")]
    GridTooCoarse { grid_degree: usize, required: usize },
    #[error("band limit mismatch: {0} vs {1}")]
    BandLimitMismatch(usize, usize),
    #[error("tensor is not antisymmetric (max |F + F^T| = {0:e})")]
    NotAntisymmetric(f64),
    #[error("metric is not Lorentzian or determinant root is imaginary: {0}")]
    NotLorentzian(String),
    #[error("linear solver failed: {0}")]
    Solver(String),
    #[error("grid convergence check failed: {0}")]
    Convergence(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
