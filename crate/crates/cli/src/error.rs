use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}", .0)]
    Core(#[from] devex_core::Error),

    #[error("{field}: {source}")]
    Field {
        field: &'static str,
        source: devex_core::Error,
    },

    #[error("cannot read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error("failed to write output: {0}")]
    Output(#[from] std::io::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) | CliError::Field { source: e, .. } => e.kind(),
            CliError::Io { .. } => "IoError",
            CliError::Parse { .. } => "ParseError",
            CliError::Usage(_) => "UsageError",
            CliError::Output(_) => "OutputError",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) | CliError::Field { source: e, .. } if e.is_numeric_failure() => 3,
            CliError::Output(_) => 1,
            _ => 2,
        }
    }
}
