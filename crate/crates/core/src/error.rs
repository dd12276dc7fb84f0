use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("field mismatch between operands")]
    FieldMismatch,
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("containment violated: {0}")]
    NotContained(String),
    #[error("chain is not maximal: {0}")]
    NotMaximal(String),
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("invalid complex point: {0}")]
    InvalidPoint(String),
    #[error("subspace is not a join of frame atoms")]
    NotRepresentable,
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("enumeration limit exceeded: {count} > {limit}")]
    LimitExceeded { count: u128, limit: u128 },
    #[error("negative weight: {0}")]
    NegativeWeight(i64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("tuple is not a vanishing subspace")]
    NotVanishing,
    #[error("instance is not DM-regular: {0}")]
    NotDmRegular(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
