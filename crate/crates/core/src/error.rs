use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty domain")]
    EmptyDomain,
    #[error("duplicate point {0:?} in domain")]
    DuplicatePoint(Vec<i64>),
    #[error("{0} is not a subset of the measure's domain")]
    NotSubset(String),
    #[error("domain or alphabet mismatch: {0}")]
    Mismatch(String),
    #[error("dense table of {needed} cells exceeds cap {cap}")]
    CapExceeded { needed: u128, cap: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("measure is not normalized (total mass {0})")]
    NotNormalized(String),
    #[error("negative mass {0}")]
    NegativeMass(String),
    #[error("measure is not locally stationary: {0}")]
    NotStationary(String),
    #[error("quotient map is not injective on the domain: {0:?} and {1:?} collide")]
    NotInjective(Vec<i64>, Vec<i64>),
    #[error("no translate of the base domain fits inside window {0}")]
    NoTranslate(String),
    #[error("search aborted after {0} nodes")]
    SearchAborted(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
