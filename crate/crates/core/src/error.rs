use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("unknown tail `{0}`")]
    UnknownTail(String),
    #[error("set does not range over this universe: {0}")]
    UniverseMismatch(String),
    #[error("minimal open sets do not form a preorder: {0}")]
    PreorderViolation(String),
    #[error("point id `{0}` is also used as a tail id")]
    NamespaceClash(String),
    #[error("walk parameter a must be at least 1 (got a={0})")]
    NotInjective(u64),
    #[error("a sequence needs at least one thread")]
    NoThreads,
    #[error("base point `{0}` is not closed")]
    BasePointNotClosed(String),
    #[error("base point must be a finite point")]
    BasePointIsTail,
    #[error("element does not belong to the carrier monoid: {0}")]
    CarrierMismatch(String),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
