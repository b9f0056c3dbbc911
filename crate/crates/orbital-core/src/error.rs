//! Error type shared by the core library.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid root datum: {0}")]
    InvalidRootDatum(String),
    #[error("invalid Levi subgroup: {0}")]
    InvalidLevi(String),
    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),
    #[error("family is not orthogonal: {0}")]
    NotOrthogonal(String),
    #[error("family is not regular: {0}")]
    NotRegular(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("computation did not stabilize: {0}")]
    NotStabilized(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("too large: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
