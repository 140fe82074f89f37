use std::path::PathBuf;

use thiserror::Error;

use crate::config::ExperimentKind;

/// Validation failure located by a field path such as `n_values[2]`.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{path}: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(#[from] ConfigError),
    /// A numeric failure at one grid point; rerun with the same seed and
    /// `n_values = [n]` to reproduce it alone.
    #[error("{experiment} failed at n = {n} (seed {seed}): {message}")]
    Numeric { experiment: ExperimentKind, n: usize, seed: u64, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}
