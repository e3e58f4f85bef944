//! Library side of the pipeline driver; the binary is a thin wrapper so
//! integration tests can run stages in-process.

pub mod config;
pub mod gen;
pub mod manifest;
pub mod stages;

use std::path::Path;

use thiserror::Error;

pub use config::PipelineConfig;
pub use stages::{run_pipeline, run_stage, Stage};

/// Errors surfaced to the user. Usage/config problems exit with 1, data
/// problems (missing or malformed inputs) with 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

/// Write a file atomically: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .map_err(|e| CliError::Data(format!("cannot create temp file in {}: {e}", dir.display())))?;
    std::io::Write::write_all(&mut tmp, bytes)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
    tmp.persist(path)
        .map_err(|e| CliError::Data(format!("cannot persist {}: {e}", path.display())))?;
    Ok(())
}
