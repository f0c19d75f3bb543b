use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FfeError {
    #[error("unsupported local dimension d={0} (supported: 2..=12)")]
    UnsupportedDimension(u32),
    #[error("unsupported number of sites n={0} (supported: 1..=4)")]
    UnsupportedArity(usize),
    #[error("expected {expected} sites, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("expected local dimension {expected}, found {found}")]
    DimensionMismatch { expected: u32, found: u32 },
    #[error("value {value} is not a residue modulo {d}")]
    Residue { value: i64, d: u32 },
    #[error("wrong number of values: expected {expected}, found {found}")]
    Length { expected: usize, found: usize },
    #[error("not a permutation: {0}")]
    NotPermutation(String),
    #[error("not a single {0}-cycle")]
    NotFullCycle(u32),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("work of {required} exceeds the budget of {budget}")]
    Budget { required: u128, budget: u128 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, FfeError>;

impl From<serde_json::Error> for FfeError {
    fn from(e: serde_json::Error) -> Self {
        FfeError::Parse(e.to_string())
    }
}

impl From<std::io::Error> for FfeError {
    fn from(e: std::io::Error) -> Self {
        FfeError::Io(e.to_string())
    }
}
