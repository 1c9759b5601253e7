use thiserror::Error;

/// Errors raised by the likelihood, mapping and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EelError {
    #[error("invalid sample: {0}")]
    InvalidSample(String),

    /// The centered observations do not span the full space, so the convex
    /// hull has an empty interior.
    #[error("degenerate sample: centered data has rank {rank} < dimension {dim}")]
    DegenerateSample { rank: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point lies outside the interior of the convex hull")]
    OutsideHull,

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("invalid expansion spec: {0}")]
    InvalidSpec(String),

    #[error("invalid moments: {0}")]
    InvalidMoments(String),

    #[error("invalid Bartlett correction: b = {b} must be smaller than n = {n}")]
    InvalidCorrection { b: f64, n: usize },

    #[error("operation unsupported for dimension {0}")]
    UnsupportedDimension(usize),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("unsupported method: {0}")]
    UnsupportedMethod(String),
}

pub type Result<T> = std::result::Result<T, EelError>;
