use thiserror::Error;

/// Errors raised by universe construction, the algebra, the text formats and the wire encoder.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} cap exceeded: {actual} > {limit}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("behaviors are defined over different universes")]
    UniverseMismatch,
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("unknown value `{value}` for attribute `{attribute}`")]
    UnknownValue { attribute: String, value: String },
    #[error("unknown candidate `{0}`")]
    UnknownCandidate(String),
    #[error("invalid universe: {0}")]
    InvalidUniverse(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("context does not belong to the universe")]
    ContextOutsideUniverse,
    #[error("invalid domain name `{name}`: {reason}")]
    InvalidName { name: String, reason: String },
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("semantic error: {0}")]
    Semantic(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
