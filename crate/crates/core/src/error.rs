use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the channel model, beamformer construction and the
/// power-allocation solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {field} {reason}")]
    Config { field: &'static str, reason: String },

    #[error("null space of the intended channel is degenerate for N = {n_antennas}")]
    DegenerateNullSpace { n_antennas: usize },

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("power allocation factor {beta} is outside [0, 1]")]
    BetaOutOfRange { beta: f64 },

    #[error("non-physical ratio coefficients: denominator b({beta}) = {value} is not positive")]
    NonPhysical { beta: f64, value: f64 },

    #[error("failed to read {path}: {source}")]
    ReadConfig {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("failed to parse configuration: {0}")]
    ParseConfig(#[from] toml::de::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Config {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
