use std::fmt;
use std::process::ExitCode;

/// Failure classes with their process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, conflicting options, unusable configuration.
    Usage(String),
    /// Unreadable or malformed instance data, output I/O.
    Input(String),
    /// A verification check did not hold.
    Check(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(1),
            CliError::Input(_) => ExitCode::from(2),
            CliError::Check(_) => ExitCode::from(3),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Check(m) => write!(f, "check failed: {m}"),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
