use alloc::string::String;

/// Errors raised by the analytics.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("record {index}: retweet count must be positive")]
    NonPositiveCount { index: usize },
    #[error("record {index}: empty account id")]
    EmptyId { index: usize },
    #[error("graph is empty")]
    EmptyGraph,
    #[error("graph has no edges")]
    NoEdges,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("anchor column {0:?} has zero loading")]
    Anchoring(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },
}

impl Error {
    /// True for numerical failures, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }
}

pub type Result<T> = core::result::Result<T, Error>;
