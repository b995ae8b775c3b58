use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("prior covariance is not symmetric positive definite")]
    NotSpd,
    #[error("noise variance must be positive and finite, got {0}")]
    NonPositiveNoise(f64),
    #[error("invalid budget {budget} for {m} candidate sensors")]
    InvalidBudget { budget: usize, m: usize },
    #[error("objective or gradient became non-finite")]
    NonFiniteObjective,
    #[error("certificate does not come from a converged relaxed solution")]
    NotCertified,
    #[error("sensor {0} is already active")]
    IndexActive(usize),
    #[error("design is not binary")]
    NotBinary,
    #[error("{count} candidate designs exceed the enumeration limit of {limit}")]
    TooLarge { count: u128, limit: u128 },
    #[error("sweep ranges do not overlap")]
    RangeMismatch,
}
