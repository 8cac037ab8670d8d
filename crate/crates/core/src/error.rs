use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid index triple {0}: {1}")]
    InvalidTriple(String, String),

    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("translation parameter {0} is not a half-integer")]
    NotHalfInteger(String),

    #[error("hypothesis (1) violated: {0}")]
    HypothesisOne(String),

    #[error("hypothesis (2) violated: {0}")]
    HypothesisTwo(String),

    #[error("parity mismatch: {0}")]
    Parity(String),

    #[error("not stable: {0}")]
    NotStable(String),

    #[error("unsupported generator: {0}")]
    UnsupportedGenerator(String),

    #[error("vector has terms outside the {0} sector")]
    WrongSector(&'static str),

    #[error("nilpotency guard exceeded after {0} iterations")]
    NilpotencyGuard(usize),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}
