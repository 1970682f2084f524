//! Error type shared by every module of the library.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("entry is not a constant: {0}")]
    NotConstant(String),
    #[error("singular: {0}")]
    Singular(String),
    #[error("not a compressed inverse system (delta = 0)")]
    NotCompressed,
    #[error("not Gorenstein at this socle degree: complement has dimension {0}")]
    NotGorenstein(usize),
    #[error("splitting unavailable: {0}")]
    SplittingUnavailable(String),
    #[error("kernel reduction failed: {0}")]
    Reduction(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("non-alternating matrix: {0}")]
    NotAlternating(String),
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
