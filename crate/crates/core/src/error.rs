use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("invalid rational literal `{0}`")]
    InvalidRational(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("set is empty")]
    EmptySet,
    #[error("parameter must be positive: {0}")]
    NonPositive(String),
    #[error("containment violated: {0}")]
    Containment(String),
    #[error("unknown chart label `{0}`")]
    UnknownLabel(String),
    #[error("invalid atlas: {0}")]
    InvalidAtlas(String),
    #[error("atlas is not a weak good coordinate system ({0} violations)")]
    NotWeak(usize),
    #[error("relation is not transitive ({0} witnesses)")]
    NotTransitive(usize),
    #[error("atlas is not strong: {0}")]
    NotStrong(String),
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error("delta too large: {0}")]
    DeltaTooLarge(String),
    #[error("no strong stage found up to n = {max_n}")]
    MaxNExhausted { max_n: u32 },
    #[error("point is not in chart `{0}`")]
    PointOutsideChart(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("too many basis elements: {0}")]
    TooManyElements(usize),
    #[error("document error at {path}: {msg}")]
    Document { path: String, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
