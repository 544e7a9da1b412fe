use dci_core::ErrorKind;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] dci_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl CliError {
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// Process exit status: 2 data, 3 numerical, 4 inconsistency.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Data => 2,
                ErrorKind::Numerical => 3,
                ErrorKind::Inconsistency => 4,
            },
            CliError::Io { .. } | CliError::Config(_) => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
