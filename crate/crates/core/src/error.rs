use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ground set size {0} is out of range (1..={max})", max = crate::sets::MAX_N)]
    GroundSetTooLarge(usize),

    #[error("full-cube enumeration needs n <= {max}, got n = {0}", max = crate::sets::MAX_CUBE_N)]
    CubeTooLarge(usize),

    #[error("element {element} is outside the ground set [{n}]")]
    ElementOutOfRange { element: usize, n: usize },

    #[error("width mismatch: expected n = {expected}, got n = {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid pattern: {0}")]
    Pattern(String),

    #[error("invalid homomorphism: {0}")]
    InvalidHomomorphism(String),

    #[error("no injective shadow selection exists")]
    ShrinkInfeasible,

    #[error("enumeration too large: {0}")]
    TooLarge(String),
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
