use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision must be positive, got {0}")]
    BadPrecision(i64),
    #[error("precision budget exhausted at {0} terms")]
    PrecisionExhausted(usize),
    #[error("delta lies in wp(F); the extension would not be a field")]
    DeltaInWp,
    #[error("slot {0} is not in the base field")]
    SlotOutsideBase(String),
    #[error("zero slot")]
    ZeroSlot,
    #[error("field kind mismatch: {0}")]
    KindMismatch(&'static str),
    #[error("residue field of dimension {0} over F_2 exceeds the supported size")]
    ResidueFieldTooLarge(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("too many factors: {0} (at most {1})")]
    TooManyFactors(usize, usize),
    #[error("certificate rejected: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
