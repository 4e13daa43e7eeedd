use thiserror::Error;

pub type Result<T> = std::result::Result<T, LabError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    /// A sequence or weight family was evaluated below its first index.
    #[error("index {index} is outside the domain of {family} (first valid index {min})")]
    Domain {
        family: &'static str,
        index: i64,
        min: i64,
    },

    #[error("index range [{lo}, {hi}] is outside the built table range [{built_lo}, {built_hi}]")]
    Range {
        lo: i64,
        hi: i64,
        built_lo: i64,
        built_hi: i64,
    },

    #[error("vector sides differ: {left:?} vs {right:?}")]
    SideMismatch {
        left: crate::vector::Side,
        right: crate::vector::Side,
    },

    #[error("entry at index {index} has log-magnitude {log_mag:.3}, outside float range")]
    Overflow { index: i64, log_mag: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("construction infeasible: {0}")]
    InfeasibleDecay(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
}

impl LabError {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        LabError::Precondition(msg.into())
    }

    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        LabError::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        LabError::Parse(msg.into())
    }
}
