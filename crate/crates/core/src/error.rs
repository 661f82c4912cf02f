use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("division is not exact")]
    NotDivisible,

    #[error("division by zero")]
    DivisionByZero,

    #[error("derivation is not in the module: {0}")]
    NotInModule(String),

    #[error("basis is not triangular")]
    NotTriangular,

    #[error("basis is not homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("tangency violation: {0}")]
    TangencyViolation(String),

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),

    #[error("scalar field too small: {0}")]
    FieldTooSmall(String),

    #[error("{0}")]
    Invalid(String),

    #[error("json: {0}")]
    Json(String),
}

impl Error {
    pub(crate) fn parse(column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            column,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
