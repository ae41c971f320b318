use std::fmt;

use lindosc::DynamicsError;

/// Process exit codes: 2 config, 3 unstable drift, 4 numerical, 1 I/O.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    UnstableDrift(String),
    Numerical(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::UnstableDrift(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::UnstableDrift(msg) => write!(f, "{msg}"),
            CliError::Numerical(msg) => write!(f, "numerical error: {msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<DynamicsError> for CliError {
    fn from(err: DynamicsError) -> Self {
        match err {
            DynamicsError::UnstableDrift { .. } => CliError::UnstableDrift(err.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}
