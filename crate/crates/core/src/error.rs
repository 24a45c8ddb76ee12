use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    /// Operands live in different Grassmann algebras or carriers.
    #[error("structural mismatch: {0}")]
    Structural(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A shift or construction would reach a variable index at or beyond the truncation.
    #[error("index {index} overflows truncation N = {n}")]
    Overflow { index: usize, n: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
