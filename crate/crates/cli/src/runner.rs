//! Experiment dispatch: build the operator, run the experiment inside a
//! worker pool of the requested size, write the data file and the metadata
//! sidecar.

use std::path::PathBuf;
use std::time::Instant;

use num_complex::Complex64;
use serde::Serialize;

use typicality_core::closedform::kumaraswamy_cdf;
use typicality_core::ensembles::{
    deformation_from, effective_dimension, purity, solve_reimann_rho,
};
use typicality_core::kicked_ising::{
    build_floquet, build_magnetization, form_factor, FloquetOperator, KicParams,
};
use typicality_core::montecarlo::histogram_transition;
use typicality_core::scan::{
    fixed_overlap_scan, full_average_scan, nonuniform_fixed_scan, nonuniform_full_scan, theta_grid,
    ScanSummary,
};
use typicality_core::LinearOperator;

use crate::config::{Experiment, ExperimentConfig};
use crate::output::{
    form_factor_csv, histogram_csv, rho_csv, scan_csv, to_pretty_json, FormFactorPoint, RhoReport,
};
use crate::CliError;

/// Metadata sidecar written next to every output file.
#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata {
    pub schema: String,
    pub config: ExperimentConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub purity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub purity_prime: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_prime: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expansion_parameter: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub within_gate: Option<bool>,
    pub wall_time_seconds: f64,
    pub library_version: String,
}

impl RunMetadata {
    fn new(schema: &str, config: &ExperimentConfig) -> Self {
        RunMetadata {
            schema: schema.to_string(),
            config: config.clone(),
            k1: None,
            purity: None,
            purity_prime: None,
            y: None,
            y_prime: None,
            expansion_parameter: None,
            within_gate: None,
            wall_time_seconds: 0.0,
            library_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    fn absorb_scan(&mut self, summary: &ScanSummary) {
        self.k1 = Some(summary.k1);
        self.purity = summary.purity;
        self.purity_prime = summary.purity_prime;
        self.y = summary.y;
        self.y_prime = summary.y_prime;
        self.expansion_parameter = summary.expansion_parameter;
        self.within_gate = summary.within_gate;
    }
}

fn build_operator(config: &ExperimentConfig) -> Result<FloquetOperator, CliError> {
    let params = KicParams::new(
        config.chain.n,
        config.chain.coupling.0,
        config.chain.h.0,
        config.chain.b.0,
    )?;
    Ok(build_floquet(params))
}

/// Runs one experiment to completion; returns the metadata that was written
/// to `<out>.meta.json`.
pub fn run(config: &ExperimentConfig) -> Result<RunMetadata, CliError> {
    let started = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("cannot build worker pool: {e}")))?;

    let (payload, mut metadata) = pool.install(|| execute(config))?;

    metadata.wall_time_seconds = started.elapsed().as_secs_f64();
    std::fs::write(&config.output, payload)?;
    let sidecar = sidecar_path(&config.output);
    std::fs::write(&sidecar, to_pretty_json(&metadata))?;
    Ok(metadata)
}

pub fn sidecar_path(output: &std::path::Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn execute(config: &ExperimentConfig) -> Result<(String, RunMetadata), CliError> {
    let grid = theta_grid(config.theta_grid);
    match config.experiment {
        Experiment::FixedOverlapScan => {
            let u = build_operator(config)?;
            let summary = fixed_overlap_scan(&u, &grid, config.samples, config.seed)?;
            scan_payload(config, summary)
        }
        Experiment::FullAverageScan => {
            let u = build_operator(config)?;
            let summary = full_average_scan(&u, &grid, config.samples, config.seed)?;
            scan_payload(config, summary)
        }
        Experiment::NonuniformFixedScan => {
            let u = build_operator(config)?;
            let m_z = config.m_z.expect("validated by resolve");
            let summary = nonuniform_fixed_scan(&u, m_z, &grid, config.samples, config.seed)?;
            scan_payload(config, summary)
        }
        Experiment::NonuniformFullScan => {
            let u = build_operator(config)?;
            let m_z = config.m_z.expect("validated by resolve");
            let m_z_prime = config.m_z_prime.expect("validated by resolve");
            let summary =
                nonuniform_full_scan(&u, m_z, m_z_prime, &grid, config.samples, config.seed)?;
            scan_payload(config, summary)
        }
        Experiment::Histogram => {
            let u = build_operator(config)?;
            let z = Complex64::new(config.theta.0.cos(), 0.0);
            let dim = u.dim();
            let reference = (z.norm() < 1e-12)
                .then_some(move |s: f64| kumaraswamy_cdf(s.clamp(0.0, 1.0), dim).unwrap());
            let histogram = histogram_transition(
                &u,
                z,
                config.samples,
                config.bins,
                config.seed,
                reference
                    .as_ref()
                    .map(|f| f as &(dyn Fn(f64) -> f64 + Sync)),
                false,
            )?;
            let mut metadata = RunMetadata::new("histogram-v1", config);
            metadata.k1 = Some(form_factor(&u, 1));
            let payload = match config.format {
                crate::OutputFormat::Csv => histogram_csv(&histogram),
                crate::OutputFormat::Json => to_pretty_json(&histogram),
            };
            Ok((payload, metadata))
        }
        Experiment::FormFactor => {
            let u = build_operator(config)?;
            let points: Vec<FormFactorPoint> = (0..=config.t_max)
                .map(|t| FormFactorPoint {
                    t,
                    k_t: form_factor(&u, t),
                })
                .collect();
            let mut metadata = RunMetadata::new("form-factor-v1", config);
            metadata.k1 = Some(points.get(1).map_or(f64::NAN, |p| p.k_t));
            let payload = match config.format {
                crate::OutputFormat::Csv => form_factor_csv(&points),
                crate::OutputFormat::Json => to_pretty_json(&points),
            };
            Ok((payload, metadata))
        }
        Experiment::RhoSolve => {
            let m_z_target = config.m_z.expect("validated by resolve");
            let observable = build_magnetization(config.chain.n)?;
            let rho = solve_reimann_rho(&observable, m_z_target)?;
            // Exercise the deformation path so singular spectra surface here.
            let _lambda = deformation_from(&rho);
            let report = RhoReport {
                m_z: m_z_target,
                y: rho.y(),
                purity: purity(&rho),
                effective_dimension: effective_dimension(&rho),
                p_min: rho.p_min(),
                p_max: rho.p_max(),
            };
            let mut metadata = RunMetadata::new("rho-solve-v1", config);
            metadata.purity = Some(report.purity);
            metadata.y = Some(report.y);
            let payload = match config.format {
                crate::OutputFormat::Csv => rho_csv(&report),
                crate::OutputFormat::Json => to_pretty_json(&report),
            };
            Ok((payload, metadata))
        }
    }
}

fn scan_payload(
    config: &ExperimentConfig,
    summary: ScanSummary,
) -> Result<(String, RunMetadata), CliError> {
    let mut metadata = RunMetadata::new("scan-v1", config);
    metadata.absorb_scan(&summary);
    let payload = match config.format {
        crate::OutputFormat::Csv => scan_csv(&summary.records),
        crate::OutputFormat::Json => to_pretty_json(&summary.records),
    };
    Ok((payload, metadata))
}
