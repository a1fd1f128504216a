use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite value at row {row}, column {col}")]
    NonFiniteValue { row: usize, col: usize },
    #[error("dataset has no observations or no coordinates")]
    EmptyDataset,
    #[error("need at least {needed} observations per sample, got {found}")]
    TooFewObservations { needed: usize, found: usize },
    #[error("kernel scale must be positive and finite, got {0}")]
    NonPositiveScale(f64),
    #[error("no draws to test")]
    EmptyDraws,
    #[error("all draws are zero; signed-rank statistic is undefined")]
    AllZeroDraws,
    #[error("invalid convex function: {0}")]
    InvalidH(String),
    #[error("number of replicates must be at least 1")]
    ZeroReplicates,
    #[error("significance level must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),
    #[error("enumeration needs {terms} terms, cap is {cap}")]
    SupportTooLarge { terms: u128, cap: u128 },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
