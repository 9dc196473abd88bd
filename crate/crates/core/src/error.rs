use thiserror::Error;

/// Every failure the library can report.
///
/// The CLI maps all of these to exit code 2 (precondition errors) except
/// [`Error::Internal`], which maps to exit code 1.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid prime: {0}")]
    InvalidPrime(String),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("not a square: {0}")]
    NotASquare(String),
    #[error("zero is not allowed here")]
    Zero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("domain mismatch: {0}")]
    Domain(String),
    #[error("invalid character value: {0}")]
    InvalidCharacter(String),
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("not a cocycle: {0}")]
    InvalidCocycle(String),
    #[error("invalid defining system: {0}")]
    InvalidDefiningSystem(String),
    #[error("invalid lift: {0}")]
    InvalidLift(String),
    #[error("fast path inapplicable: {0}")]
    InapplicableFastPath(String),
    #[error("unsupported place: {0}")]
    UnsupportedPlace(String),
    #[error("inapplicable: {0}")]
    Inapplicable(String),
    #[error("outside the proved family: {0}")]
    OutOfFamily(String),
    #[error("internal failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
