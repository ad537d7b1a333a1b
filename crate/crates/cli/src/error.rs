use std::path::PathBuf;

use fracspec_core::Error as CoreError;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("refused: {0} (rerun with --full-scale to lift the desk-scale limit)")]
    Budget(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }

    pub fn csv(path: impl Into<PathBuf>) -> impl FnOnce(csv::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Csv { path, source }
    }

    /// 2 config, 3 numeric failure, 4 resource budget, 5 I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Budget(_) => 4,
            CliError::Io { .. } | CliError::Csv { .. } => 5,
            CliError::Core(e) => match e {
                CoreError::InvalidParameter(_)
                | CoreError::LengthMismatch { .. }
                | CoreError::DimensionMismatch(_)
                | CoreError::IncompatibleLadder(_) => 2,
                CoreError::BudgetExceeded { .. } => 4,
                CoreError::Io(_)
                | CoreError::MissingKey(_)
                | CoreError::ChecksumMismatch(_)
                | CoreError::VersionMismatch { .. }
                | CoreError::KeyMismatch { .. }
                | CoreError::CacheFormat { .. } => 5,
                _ => 3,
            },
        }
    }
}
