use alloc::string::String;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unresolved: {0}")]
    Resolution(String),
    #[error("chain mismatch: {0}")]
    ChainMismatch(String),
    #[error("law violation: {0}")]
    LawViolation(String),
    #[error("oracle failure: {0}")]
    OracleFailure(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not idempotent: {0}")]
    NotIdempotent(String),
    #[error("index out of range: {0}")]
    Index(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
