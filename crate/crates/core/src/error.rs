use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid operator: {0}")]
    InvalidOperator(String),
    #[error("function undefined on spectrum: {0}")]
    DomainError(String),
    #[error("operator is not positive: {0}")]
    NotPositive(String),
    #[error("operator is singular: {0}")]
    Singular(String),
    #[error("shape mismatch: {0}")]
    ShapeError(String),
    #[error("invalid exponent {0}")]
    InvalidExponent(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("insufficient data: need at least {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("grid does not cover the required range: {0}")]
    InsufficientGrid(String),
    #[error("operator norm {0} exceeds 1")]
    NotNormalized(f64),
    #[error("wrong lattice dimension {0}")]
    WrongDimension(usize),
    #[error("insufficient resolution: {0}")]
    InsufficientResolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;
