use thiserror::Error;

/// Errors raised by the geometry, polynomial, entropy and search routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    CompositeP(u64),
    #[error("field order {0} exceeds 2^16")]
    FieldTooLarge(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible fields: {0}")]
    IncompatibleFields(String),
    #[error("value out of range: {0}")]
    BadRange(String),
    #[error("enumeration of {needed} objects exceeds budget {budget}")]
    BudgetExceeded { needed: String, budget: u64 },
    #[error("empty input")]
    EmptyInput,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("line direction is the zero vector")]
    ZeroDirection,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("bad size: {0}")]
    BadSize(String),
    #[error("epsilon must lie strictly between 0 and 1, got {0}")]
    BadEpsilon(String),
    #[error("delta must lie strictly between 0 and 1, got {0}")]
    BadDelta(String),
    #[error("not a direction family: {0}")]
    NotADirectionFamily(String),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("set is not ({k},{m})-Furstenberg")]
    NotFurstenberg { k: usize, m: u64 },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
