use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed object: mismatched dimensions, duplicate labels, missing states.
    #[error("structural error: {0}")]
    Structural(String),

    /// A caller violated an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("undefined transition for state `{state}`, symbol `{symbol}`, outcome `{outcome}`")]
    UndefinedTransition { state: String, symbol: char, outcome: String },

    #[error("coefficient too large: residual has eigenvalue {eigenvalue}")]
    CoefficientTooLarge { eigenvalue: String },

    #[error("index {index} is outside the oracle depth {depth}")]
    OutOfRange { index: usize, depth: usize },

    /// A budget was exhausted. `partial` carries a summary of what was computed.
    #[error("resource limit reached: {message}")]
    Resource { message: String, partial: Option<String> },

    #[error("machine never halts")]
    NeverHalts,

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}
