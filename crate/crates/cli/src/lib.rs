//! Library behind the `projline` binary: seeded random inputs, the batch
//! verification machinery, and the single-case report pipelines.

pub mod export;
pub mod random;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] projline::Error),

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),

    #[error("input parse failure: {0}")]
    Parse(#[from] serde_json::Error),
}

impl CliError {
    /// Process exit code: theorem failures are signalled separately with 1;
    /// everything reaching this type is an input/config/environment problem.
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Parse a diffeomorphism spec from a JSON file and validate it.
pub fn load_spec(path: &std::path::Path) -> Result<projline::DiffeoSpec64, CliError> {
    let text = std::fs::read_to_string(path)?;
    let spec: projline::DiffeoSpec64 = serde_json::from_str(&text)?;
    spec.validate()?;
    Ok(spec)
}
