use std::fmt;
use std::process::ExitCode;

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    /// Status 1: a file could not be read or written.
    Io(anyhow::Error),
    /// Status 2: the configuration or a flag is invalid.
    Config(anyhow::Error),
    /// Status 3: the initial state carries no entanglement.
    Separable(String),
    /// Status 4: a self check did not pass.
    Validation(String),
}

impl CliError {
    pub fn config(msg: impl fmt::Display) -> Self {
        CliError::Config(anyhow::anyhow!("{msg}"))
    }

    pub fn status(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Separable(_) => 3,
            CliError::Validation(_) => 4,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.status())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(e) => write!(f, "I/O error: {e:#}"),
            CliError::Config(e) => write!(f, "invalid configuration: {e:#}"),
            CliError::Separable(msg) => write!(f, "separable initial state: {msg}"),
            CliError::Validation(msg) => write!(f, "validation failed: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<qdecay_core::Error> for CliError {
    fn from(e: qdecay_core::Error) -> Self {
        match e {
            qdecay_core::Error::Separable => CliError::Separable("concurrence is zero at t = 0".into()),
            other => CliError::Config(other.into()),
        }
    }
}
