use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field order {q}: {reason}")]
    InvalidOrder { q: u64, reason: String },

    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("not a rational integer: {0}")]
    NonInteger(String),

    #[error("unsupported case: {0}")]
    UnsupportedCase(String),

    #[error("block {block} does not occur in {x1} (x) {x2}")]
    BlockAbsent { x1: String, x2: String, block: String },

    #[error("cannot parse `{token}`: expected {expected}")]
    Parse { token: String, expected: String },

    #[error("{what} = {value} is out of range, valid window is {window}")]
    OutOfRange { what: String, value: String, window: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(token: &str, expected: &str) -> Error {
    Error::Parse { token: token.to_string(), expected: expected.to_string() }
}
