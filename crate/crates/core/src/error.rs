use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    DomainMismatch,
    #[error("element is not a square")]
    NotASquare,
    #[error("polynomial is not a p-th power")]
    NotAPthPower,
    #[error("undefined: {0}")]
    Undefined(String),
    #[error("{0} is not an odd prime")]
    NotAnOddPrime(u64),
    #[error("characteristic {0} exceeds the supported word size (p < 2^32)")]
    FieldTooLarge(u64),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("inseparability degree is ill-defined: {0}")]
    IllDefined(String),
    #[error("map is a square (c1 = 0)")]
    DegenerateSquare,
    #[error("iterates are inseparable: {0}")]
    IteratesInseparable(String),
    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    /// True for errors caused by the caller's input rather than by the computation.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, Error::Io(_) | Error::Parse { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
