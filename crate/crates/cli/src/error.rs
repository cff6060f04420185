use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("{0}")]
    Data(charkit::Error),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    /// A theorem check failed.
    #[error("invariant violation: {0}")]
    Invariant(String),
}

impl CliError {
    /// 1 = usage, 2 = data, 3 = invariant violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) | CliError::Io { .. } => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

impl From<charkit::Error> for CliError {
    fn from(e: charkit::Error) -> Self {
        match e {
            charkit::Error::InvariantViolation(msg) => CliError::Invariant(msg),
            other => CliError::Data(other),
        }
    }
}
