use thiserror::Error;

/// Failures surfaced by the command-line tool, split by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or invalid configuration; exit code 1.
    #[error("config error: {0}")]
    Config(String),
    /// Solver failure or I/O error while running; exit code 2.
    #[error("runtime failure: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

pub(crate) fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}
