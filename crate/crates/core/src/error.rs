use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("zero vector has no direction")]
    ZeroVector,

    #[error("dataset is not linearly separable through the origin (min-norm {min_norm:.3e})")]
    Inseparable { min_norm: f64 },

    #[error("rejection budget exceeded after {attempts} draws")]
    RejectionBudget { attempts: usize },

    #[error("malformed dataset at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("numerical breakdown: {0}")]
    Numerical(String),

    #[error("cut removed all walkers")]
    WalkersExhausted,

    #[error("required sample count {required} exceeds budget {budget}")]
    BudgetExceeded { required: u64, budget: u64 },

    #[error("resource guard exceeded: {0}")]
    ResourceGuard(String),

    #[error("empty grid: {0}")]
    EmptyGrid(String),

    #[error("walk kernel graph is disconnected")]
    Disconnected,
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
