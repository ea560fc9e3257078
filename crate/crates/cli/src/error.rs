use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: line {line}: {msg}", path.display())]
    Malformed { path: PathBuf, line: u64, msg: String },
    #[error("{}: no points", path.display())]
    NoPoints { path: PathBuf },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] fairclust::Error),
}

impl CliError {
    /// 2 for I/O failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
