use std::fmt;

use eelkit::EelError;

/// Failures mapped to process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or argument values; exit code 2.
    Usage(String),
    /// Input data unusable for the request; exit code 3.
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
        }
    }
}

impl From<EelError> for CliError {
    fn from(e: EelError) -> Self {
        match e {
            EelError::InvalidSample(_)
            | EelError::DegenerateSample { .. }
            | EelError::InvalidMoments(_)
            | EelError::InvalidCorrection { .. }
            | EelError::OutsideHull
            | EelError::NoConvergence { .. }
            | EelError::UnsupportedDimension(_) => CliError::Data(e.to_string()),
            EelError::DimensionMismatch { .. }
            | EelError::InvalidSpec(_)
            | EelError::DomainError(_)
            | EelError::InvalidScenario(_)
            | EelError::UnsupportedMethod(_) => CliError::Usage(e.to_string()),
        }
    }
}
