use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Column has zero sample standard deviation (0-based column index).
    #[error("column {0} is constant (zero standard deviation)")]
    ConstantColumn(usize),

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("bad subset: {0}")]
    BadSubset(String),

    #[error("bandwidth must be positive, got {0}")]
    NonPositiveBandwidth(f64),

    #[error("invalid bandwidth grid: {0}")]
    InvalidGrid(String),

    #[error("invalid weight function: {0}")]
    InvalidWeight(String),

    /// Relative gain is undefined against a perfect previous fit.
    #[error("previous best score is zero")]
    ZeroPreviousScore,

    #[error("stage {0} produced no candidate subsets")]
    EmptyStage(usize),

    #[error("exhaustive search would score {count} subsets (limit {limit})")]
    TooManySubsets { count: u128, limit: u128 },

    #[error("invalid selector configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid model specification: {0}")]
    InvalidSpec(String),
}
