use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("word length {found} does not match n = {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("word has weight {found}, expected {expected}")]
    WeightMismatch { expected: usize, found: usize },

    #[error("duplicate word at position {0}")]
    DuplicateWord(usize),

    #[error("{what} needs {size} items, above the cap of {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },

    #[error("operation requires {0} minimum distance")]
    Parity(&'static str),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
