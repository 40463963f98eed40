use std::path::{Path, PathBuf};

/// Failure of a command, split by exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad input content or configuration (exit 1).
    #[error("{0}")]
    Validation(String),
    /// One or more input files failed to parse or validate (exit 1).
    #[error("{} invalid input file(s):{}", .0.len(), list(.0))]
    InvalidFiles(Vec<(PathBuf, String)>),
    /// Reading or writing the filesystem failed (exit 2).
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn list(files: &[(PathBuf, String)]) -> String {
    files.iter().map(|(p, e)| format!("\n  {}: {e}", p.display())).collect()
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::InvalidFiles(_) => 1,
            CliError::Io { .. } => 2,
        }
    }

    pub fn io(path: impl AsRef<Path>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.as_ref().to_path_buf();
        move |source| CliError::Io { path, source }
    }

    pub fn invalid(msg: impl std::fmt::Display) -> CliError {
        CliError::Validation(msg.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
