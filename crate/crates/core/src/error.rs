use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parts are not weakly decreasing: {0:?}")]
    InvalidPartition(Vec<usize>),
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("unsupported field order {0}")]
    UnsupportedField(u64),
    #[error("lower subspace is not contained in the upper subspace")]
    NotContained,
    #[error("no subspace of dimension {d} lies between dimensions {lower} and {upper}")]
    InfeasibleDimension { d: usize, lower: usize, upper: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("orbit classification inconsistent: {0}")]
    Classification(String),
    #[error("budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("duplicate sample point q = {0}")]
    DuplicateSample(u64),
    #[error("interpolated coefficient of t^{degree} is not an integer: {value}")]
    NonIntegral { degree: usize, value: String },
    #[error("need {needed} samples, have {available}")]
    InsufficientSamples { needed: usize, available: usize },
    #[error("certificate failed: {0}")]
    Certificate(String),
    #[error("parse error: {0}")]
    Parse(String),
}
