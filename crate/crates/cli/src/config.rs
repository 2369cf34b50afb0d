//! Experiment configuration: JSON file and/or command-line flags, with
//! flags taking precedence. Angle-valued fields accept plain numbers or
//! exact multiples of π written as "pi/4", "2pi/5", ...

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use typicality_core::kicked_ising::parse_angle;

use crate::CliError;

/// An angle that deserializes from a number or a π-literal string and
/// serializes as the resolved number, so an echoed config reruns exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle(pub f64);

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Literal(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(x) => Ok(Angle(x)),
            Raw::Literal(text) => parse_angle(&text)
                .map(Angle)
                .map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutputFormat::Csv => write!(f, "csv"),
            OutputFormat::Json => write!(f, "json"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    FixedOverlapScan,
    FullAverageScan,
    Histogram,
    NonuniformFixedScan,
    NonuniformFullScan,
    FormFactor,
    RhoSolve,
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Experiment::FixedOverlapScan => "fixed-overlap-scan",
            Experiment::FullAverageScan => "full-average-scan",
            Experiment::Histogram => "histogram",
            Experiment::NonuniformFixedScan => "nonuniform-fixed-scan",
            Experiment::NonuniformFullScan => "nonuniform-full-scan",
            Experiment::FormFactor => "form-factor",
            Experiment::RhoSolve => "rho-solve",
        };
        write!(f, "{name}")
    }
}

/// Chain parameters as they appear in config files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainSection {
    pub n: usize,
    #[serde(rename = "J")]
    pub coupling: Angle,
    pub h: Angle,
    pub b: Angle,
}

/// Fully resolved experiment configuration; this is what the metadata
/// sidecar echoes, and rerunning it reproduces the output bit for bit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub chain: ChainSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_z: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_z_prime: Option<f64>,
    pub theta_grid: usize,
    pub samples: usize,
    pub seed: u64,
    pub output: PathBuf,
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    /// Largest T for the form-factor experiment.
    pub t_max: usize,
    /// Bin count for the histogram experiment.
    pub bins: usize,
    /// Overlap angle for the histogram experiment (|z| = cos θ).
    pub theta: Angle,
}

/// Config file contents / flag values before merging: everything optional.
#[derive(Debug, Default, Clone, Serialize, Deserialize)]
pub struct PartialConfig {
    #[serde(default)]
    pub experiment: Option<Experiment>,
    #[serde(default)]
    pub chain: Option<PartialChain>,
    #[serde(default)]
    pub m_z: Option<f64>,
    #[serde(default)]
    pub m_z_prime: Option<f64>,
    #[serde(default)]
    pub theta_grid: Option<usize>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<OutputFormat>,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub t_max: Option<usize>,
    #[serde(default)]
    pub bins: Option<usize>,
    #[serde(default)]
    pub theta: Option<Angle>,
}

#[derive(Debug, Default, Clone, Serialize, Deserialize)]
pub struct PartialChain {
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default, rename = "J")]
    pub coupling: Option<Angle>,
    #[serde(default)]
    pub h: Option<Angle>,
    #[serde(default)]
    pub b: Option<Angle>,
}

impl PartialConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
    }

    /// Overlay `self` on top of `base`: present fields win.
    pub fn over(self, base: PartialConfig) -> PartialConfig {
        let chain = match (self.chain, base.chain) {
            (Some(top), Some(bottom)) => Some(PartialChain {
                n: top.n.or(bottom.n),
                coupling: top.coupling.or(bottom.coupling),
                h: top.h.or(bottom.h),
                b: top.b.or(bottom.b),
            }),
            (top, bottom) => top.or(bottom),
        };
        PartialConfig {
            experiment: self.experiment.or(base.experiment),
            chain,
            m_z: self.m_z.or(base.m_z),
            m_z_prime: self.m_z_prime.or(base.m_z_prime),
            theta_grid: self.theta_grid.or(base.theta_grid),
            samples: self.samples.or(base.samples),
            seed: self.seed.or(base.seed),
            output: self.output.or(base.output),
            format: self.format.or(base.format),
            workers: self.workers.or(base.workers),
            t_max: self.t_max.or(base.t_max),
            bins: self.bins.or(base.bins),
            theta: self.theta.or(base.theta),
        }
    }

    /// Apply defaults and check per-experiment requirements.
    pub fn resolve(self) -> Result<ExperimentConfig, CliError> {
        let experiment = self
            .experiment
            .ok_or_else(|| CliError::Config("no experiment selected".into()))?;
        let chain = self.chain.unwrap_or_default();
        let n = chain
            .n
            .ok_or_else(|| CliError::Config("chain length --n is required".into()))?;
        let output = self
            .output
            .ok_or_else(|| CliError::Config("output path --out is required".into()))?;

        // Default sample counts mirror the figure protocols: 10 per point
        // for the fixed-reference scatter, 100 for the both-states scatter,
        // 10^4 for histograms.
        let default_samples = match experiment {
            Experiment::FixedOverlapScan | Experiment::NonuniformFixedScan => 10,
            Experiment::FullAverageScan | Experiment::NonuniformFullScan => 100,
            _ => 10_000,
        };
        let config = ExperimentConfig {
            experiment,
            chain: ChainSection {
                n,
                coupling: chain.coupling.unwrap_or(Angle(0.0)),
                h: chain.h.unwrap_or(Angle(0.0)),
                b: chain.b.unwrap_or(Angle(0.0)),
            },
            m_z: self.m_z,
            m_z_prime: self.m_z_prime,
            theta_grid: self.theta_grid.unwrap_or(21),
            samples: self.samples.unwrap_or(default_samples),
            seed: self.seed.unwrap_or(42),
            output,
            format: self.format.unwrap_or(OutputFormat::Csv),
            workers: self.workers,
            t_max: self.t_max.unwrap_or(10),
            bins: self.bins.unwrap_or(50),
            theta: self.theta.unwrap_or(Angle(std::f64::consts::FRAC_PI_2)),
        };

        if config.theta_grid < 2 {
            return Err(CliError::Config(
                "theta_grid needs at least 2 points".into(),
            ));
        }
        match experiment {
            Experiment::NonuniformFixedScan if config.m_z.is_none() => Err(CliError::Config(
                "--m-z is required for this experiment".into(),
            )),
            Experiment::NonuniformFullScan
                if config.m_z.is_none() || config.m_z_prime.is_none() =>
            {
                Err(CliError::Config(
                    "--m-z and --m-z-prime are required for this experiment".into(),
                ))
            }
            Experiment::RhoSolve if config.m_z.is_none() => {
                Err(CliError::Config("--m-z is required for rho-solve".into()))
            }
            _ => Ok(config),
        }
    }
}
