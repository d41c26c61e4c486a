//! Process-level error type: every failure is either a validation error
//! (bad input, unusable request — exit 1) or a numerical failure (the
//! computation itself broke down — exit 2).

use qcorr_core::{CriteriaError, Error, LinalgError, MeasureError, SpptError, StateError};

/// One failure with its process exit code (1 or 2) and a message for the
/// diagnostic stream.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

/// Linear-algebra failures are always numerical: they mean an iteration or
/// a decomposition broke down at runtime.
impl From<LinalgError> for CliError {
    fn from(e: LinalgError) -> Self {
        CliError::numerical(e.to_string())
    }
}

/// State construction rejects bad input — validation — except when the
/// rejection itself came from a numerical kernel failure.
impl From<StateError> for CliError {
    fn from(e: StateError) -> Self {
        match e {
            StateError::Numeric(inner) => inner.into(),
            other => CliError::validation(other.to_string()),
        }
    }
}

impl From<CriteriaError> for CliError {
    fn from(e: CriteriaError) -> Self {
        CliError::numerical(e.to_string())
    }
}

/// Factorization errors: a state that simply is not SSPPT (or has the
/// wrong shape for a route) is a validation problem with the request; a
/// residual block failing positivity or a reconstruction drifting away is
/// a numerical failure.
impl From<SpptError> for CliError {
    fn from(e: SpptError) -> Self {
        match e {
            SpptError::NotSsppt { .. } | SpptError::WrongShape { .. } => {
                CliError::validation(e.to_string())
            }
            SpptError::NotPsdResidual { .. } | SpptError::ReconstructionFailed { .. } => {
                CliError::numerical(e.to_string())
            }
            SpptError::Numeric(inner) => inner.into(),
        }
    }
}

impl From<MeasureError> for CliError {
    fn from(e: MeasureError) -> Self {
        match e {
            MeasureError::Numeric(inner) => inner.into(),
            other => CliError::validation(other.to_string()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Linalg(inner) => inner.into(),
            Error::State(inner) => inner.into(),
            Error::Criteria(inner) => inner.into(),
            Error::Sppt(inner) => inner.into(),
            Error::Measure(inner) => inner.into(),
        }
    }
}
