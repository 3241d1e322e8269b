use std::path::PathBuf;

use serde::Serialize;

/// Exit status of a failed run. Each error class has its own code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorClass {
    Usage,
    Io,
    Parse,
    Validation,
    NonConvergence,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Usage => 2,
            ErrorClass::Io => 3,
            ErrorClass::Parse => 4,
            ErrorClass::Validation => 5,
            ErrorClass::NonConvergence => 6,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] slant_core::Error),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn class(&self) -> ErrorClass {
        use slant_core::Error;
        match self {
            CliError::Usage(_) => ErrorClass::Usage,
            CliError::Io { .. } => ErrorClass::Io,
            CliError::Core(Error::Parse { .. }) => ErrorClass::Parse,
            CliError::Core(Error::NonConvergence { .. }) => ErrorClass::NonConvergence,
            CliError::Core(_) => ErrorClass::Validation,
        }
    }

    /// One-line JSON record written to stderr on failure.
    pub fn record(&self) -> String {
        #[derive(Serialize)]
        struct Record<'a> {
            error: ErrorClass,
            exit_code: i32,
            message: &'a str,
        }
        let message = self.to_string();
        let class = self.class();
        serde_json::to_string(&Record { error: class, exit_code: class.exit_code(), message: &message })
            .expect("plain strings serialize")
    }
}
