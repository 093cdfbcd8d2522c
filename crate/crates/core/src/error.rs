use thiserror::Error;

/// Errors surfaced by the toolkit.
///
/// `InvariantViolation` and `PsdViolation` indicate that a numerical
/// invariant failed after construction-time checks passed; the CLI maps
/// them to a dedicated exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("not an SL(2,Z) matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid theta parameter: {0}")]
    InvalidTheta(String),

    #[error("theta mismatch between operands")]
    ThetaMismatch,

    #[error("operational partition fails unity check: max deviation {deviation:.3e} (tolerance {tolerance:.1e})")]
    PartitionUnity { deviation: f64, tolerance: f64 },

    #[error("numerical invariant violated: {0}")]
    InvariantViolation(String),

    #[error("correlation matrix not positive semidefinite: eigenvalue {eigenvalue:.3e} below -1e-9")]
    PsdViolation { eigenvalue: f64 },

    #[error("precision budget violated: {needed} fractional bits required, {have} available")]
    PrecisionBudget { needed: u32, have: u32 },

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("input too short: need at least {required}, got {got}")]
    ShortInput { required: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
