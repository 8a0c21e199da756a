use thiserror::Error;

/// Failure classes of a command, each with its own process exit code.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    /// At least one validated property failed (exit code 1).
    #[error("validation failed: {0}")]
    Validation(String),
    /// Bad arguments, grid specs or preconditions (exit code 2).
    #[error("configuration error: {0}")]
    Config(String),
    /// A result could not be certified to the required accuracy (exit code 3).
    #[error("accuracy error: {0}")]
    Accuracy(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Config(_) => 2,
            CliError::Accuracy(_) => 3,
        }
    }
}

impl From<stein_md::Error> for CliError {
    fn from(e: stein_md::Error) -> Self {
        use stein_md::Error as E;
        match e {
            E::Domain(_) | E::Precondition(_) | E::SizeGuard(_) => CliError::Config(e.to_string()),
            E::Consistency(_) | E::Accuracy(_) => CliError::Accuracy(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
