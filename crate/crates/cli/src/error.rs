use std::fmt;

use novas_core::Error as CoreError;

/// Failure classes with distinct process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or unusable input data (exit code 2).
    Input(String),
    /// Invalid flags or configuration (exit code 3).
    Config(String),
    /// Anything else, e.g. an unwritable output file (exit code 1).
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Runtime(_) => 1,
            CliError::Input(_) => 2,
            CliError::Config(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::ConstantColumn(_) | CoreError::InvalidDataset(_) => {
                CliError::Input(e.to_string())
            }
            CoreError::InvalidConfig(_)
            | CoreError::InvalidGrid(_)
            | CoreError::InvalidWeight(_)
            | CoreError::InvalidSpec(_)
            | CoreError::TooManySubsets { .. } => CliError::Config(e.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
