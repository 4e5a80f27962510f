use thiserror::Error;

use crate::index::MultiIndex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("inner series has a nonzero constant term")]
    ConstantTerm,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("arithmetic mode mismatch: germ is {germ} but spectrum is {spectrum}")]
    ModeMismatch { germ: &'static str, spectrum: &'static str },
    #[error("Jordan off-diagonal entries are nonzero; the solver needs a diagonal linear part")]
    NotDiagonal,
    #[error("zero small divisor at k = {index}, coordinate {coord}")]
    ZeroDivisor { index: MultiIndex, coord: usize },
    #[error("index {0} lies in K2")]
    InK2(MultiIndex),
    #[error("sequence needs ω up to {needed} but the table stops at {available}")]
    OutOfRange { needed: u64, available: u64 },
    #[error("t = {0} is outside the domain of the closed form")]
    Domain(f64),
    #[error("malformed document: {0}")]
    Document(String),
}
