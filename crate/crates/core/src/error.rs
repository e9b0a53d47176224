use thiserror::Error;

use crate::linalg::Overflow;

/// Errors raised by the engine. Matrix positions are stored 0-based and
/// displayed 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is empty")]
    EmptyMatrix,
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("a[{},{}] = {value}, expected 2", .index + 1, .index + 1)]
    DiagonalNotTwo { index: usize, value: i64 },
    #[error("a[{},{}] = {value} is positive off the diagonal", .row + 1, .col + 1)]
    PositiveOffDiagonal { row: usize, col: usize, value: i64 },
    #[error("a[{},{}] and a[{},{}] must vanish together", .row + 1, .col + 1, .col + 1, .row + 1)]
    ZeroAsymmetry { row: usize, col: usize },
    #[error("index {index} out of range for a matrix of size {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("enumeration exceeded the cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("{value} is not a prime")]
    NotPrime { value: u64 },
    #[error("{prime} divides the order of a finite parabolic subgroup")]
    BadPrime { prime: u64 },
    #[error("collapse is not certified at the prime {prime}")]
    NotCollapsed { prime: u64 },
    #[error("structure maps are not functorial on {lower} < {middle} < {upper}")]
    FunctorialityViolation { lower: usize, middle: usize, upper: usize },
    #[error("invalid functor presentation: {0}")]
    InvalidFunctor(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("coboundary d{degree} * d{prev} is nonzero", prev = .degree - 1)]
    NonzeroSquare { degree: usize },
    #[error("integer overflow in exact arithmetic")]
    Overflow,
}

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn name(&self) -> &'static str {
        match self {
            Error::EmptyMatrix => "EmptyMatrix",
            Error::NotSquare { .. } => "NotSquare",
            Error::DiagonalNotTwo { .. } => "DiagonalNotTwo",
            Error::PositiveOffDiagonal { .. } => "PositiveOffDiagonal",
            Error::ZeroAsymmetry { .. } => "ZeroAsymmetry",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::NotPrime { .. } => "NotPrime",
            Error::BadPrime { .. } => "BadPrime",
            Error::NotCollapsed { .. } => "NotCollapsed",
            Error::FunctorialityViolation { .. } => "FunctorialityViolation",
            Error::InvalidFunctor(_) => "InvalidFunctor",
            Error::InvalidPoset(_) => "InvalidPoset",
            Error::InvalidModule(_) => "InvalidModule",
            Error::NonzeroSquare { .. } => "NonzeroSquare",
            Error::Overflow => "Overflow",
        }
    }
}

impl From<Overflow> for Error {
    fn from(_: Overflow) -> Self {
        Error::Overflow
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
