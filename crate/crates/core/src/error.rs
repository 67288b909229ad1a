use thiserror::Error;

/// Errors raised across the toolkit.
///
/// User-facing messages report state indices 1-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid proposal: {0}")]
    InvalidProposal(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid ratio at proposal {position}: {value} (ratios must be finite and > 0)")]
    InvalidRatio { position: usize, value: f64 },

    #[error("likelihood ratio overflow for state {state}: log-ratio {log_ratio}")]
    RatioOverflow { state: usize, log_ratio: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("linear program {0}")]
    LpFailure(String),

    #[error("membership violation: {0}")]
    MembershipViolation(String),

    #[error("transition matrix is not ergodic (singular invariant-measure system)")]
    NonErgodic,

    #[error("enumeration guard exceeded: {0}")]
    EnumerationGuard(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
