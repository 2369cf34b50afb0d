//! Experiment runner: wires the scan/histogram/spectral machinery to config
//! files, CSV/JSON outputs and a metadata sidecar.

pub mod config;
mod output;
mod runner;

pub use config::{Angle, ChainSection, Experiment, ExperimentConfig, OutputFormat, PartialConfig};
pub use runner::{run, RunMetadata};

use thiserror::Error;

/// CLI-level errors carrying the process exit code: 1 for configuration and
/// I/O problems, 2 for numeric failures (e.g. m_z outside the spectrum).
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }
}

impl From<typicality_core::Error> for CliError {
    fn from(err: typicality_core::Error) -> Self {
        use typicality_core::Error as E;
        match err {
            E::OutOfRange { .. }
            | E::Numeric(_)
            | E::SingularDeformation { .. }
            | E::DegenerateSampling { .. }
            | E::Domain(_)
            | E::NotNormalized { .. } => CliError::Numeric(err.to_string()),
            E::InvalidDimension { .. }
            | E::DimensionMismatch { .. }
            | E::ResourceLimit { .. }
            | E::UnsupportedOrder { .. }
            | E::InvalidArgument(_) => CliError::Config(err.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}
