use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(String),

    #[error("polar decomposition of a zero matrix")]
    ZeroMatrix,

    #[error("invalid quantum relation: {0}")]
    InvalidRelation(String),

    #[error("not a quantum function: {0}")]
    NotQuantumFunction(String),

    #[error("invalid homomorphism: {0}")]
    InvalidHomomorphism(String),

    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),

    #[error("ill-conditioned input: {0}")]
    IllConditioned(String),

    #[error("algebra is not diagonal: {0}")]
    NonDiagonal(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}
