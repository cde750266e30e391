use std::process::ExitCode;

use riesz_core::Error as CoreError;

/// CLI failures, each tied to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Parse(String),
    #[error("infeasible input: {0}")]
    Infeasible(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Parse(_) | CliError::Io { .. } => 2,
            CliError::Infeasible(_) => 3,
            CliError::Unsupported(_) => 4,
        }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<CliError> for ExitCode {
    fn from(e: CliError) -> ExitCode {
        ExitCode::from(e.exit_code())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NotNewtonian { .. } | CoreError::UnsupportedOracle | CoreError::MissingHolder => {
                CliError::Unsupported(e.to_string())
            }
            _ => CliError::Infeasible(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
