use thiserror::Error;

/// Errors surfaced by every stage of the pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("degenerate fiber at t = {t}: {reason}")]
    DegenerateFiber { t: String, reason: String },
    #[error("bad reduction at p = {0}")]
    BadPrime(u64),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("no certificate for {curve}: {reason}")]
    NoCertificate { curve: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
