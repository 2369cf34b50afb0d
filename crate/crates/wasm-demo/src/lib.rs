//! Browser bindings for the transition-probability experiments.
//!
//! Three entry points, each taking a JSON config string and returning a
//! JSON payload ready for plotting: θ-scans (analytic curve + Monte Carlo),
//! transition-probability histograms with the analytic density overlay, and
//! the spectral form factor.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;

use typicality_core::closedform::{kumaraswamy_cdf, kumaraswamy_pdf};
use typicality_core::kicked_ising::{build_floquet, form_factor, FloquetOperator, KicParams};
use typicality_core::montecarlo::{histogram_transition, HistogramResult};
use typicality_core::scan::{
    fixed_overlap_scan, full_average_scan, nonuniform_fixed_scan, nonuniform_full_scan, theta_grid,
    ScanSummary,
};
use typicality_core::LinearOperator;

#[derive(Deserialize)]
struct ScanConfig {
    /// "fixed", "full", "nonuniform-fixed" or "nonuniform-full".
    kind: String,
    n: usize,
    #[serde(rename = "J")]
    coupling: f64,
    h: f64,
    b: f64,
    #[serde(default)]
    m_z: Option<f64>,
    #[serde(default)]
    m_z_prime: Option<f64>,
    points: usize,
    samples: usize,
    seed: u64,
}

#[derive(Deserialize)]
struct HistogramConfig {
    n: usize,
    #[serde(rename = "J")]
    coupling: f64,
    h: f64,
    b: f64,
    /// Overlap angle; |z| = cos θ.
    theta: f64,
    samples: usize,
    bins: usize,
    seed: u64,
}

#[derive(Deserialize)]
struct FormFactorConfig {
    n: usize,
    #[serde(rename = "J")]
    coupling: f64,
    h: f64,
    b: f64,
    t_max: usize,
}

#[derive(Serialize)]
struct HistogramPayload {
    #[serde(flatten)]
    histogram: HistogramResult,
    /// Analytic density for the z = 0 law, sampled for the overlay curve.
    pdf_overlay: Vec<[f64; 2]>,
    dim: usize,
}

#[derive(Serialize)]
struct FormFactorPayload {
    t: Vec<usize>,
    k: Vec<f64>,
    dim: usize,
}

fn stringify(err: impl std::fmt::Display) -> String {
    err.to_string()
}

fn operator(n: usize, coupling: f64, h: f64, b: f64) -> Result<FloquetOperator, String> {
    let params = KicParams::new(n, coupling, h, b).map_err(stringify)?;
    Ok(build_floquet(params))
}

fn scan_impl(config: &str) -> Result<String, String> {
    let cfg: ScanConfig = serde_json::from_str(config).map_err(stringify)?;
    let u = operator(cfg.n, cfg.coupling, cfg.h, cfg.b)?;
    let grid = theta_grid(cfg.points.max(2));
    let summary: ScanSummary = match cfg.kind.as_str() {
        "fixed" => fixed_overlap_scan(&u, &grid, cfg.samples, cfg.seed),
        "full" => full_average_scan(&u, &grid, cfg.samples, cfg.seed),
        "nonuniform-fixed" => {
            let m_z = cfg.m_z.ok_or("m_z is required for this scan")?;
            nonuniform_fixed_scan(&u, m_z, &grid, cfg.samples, cfg.seed)
        }
        "nonuniform-full" => {
            let (m_z, m_z_prime) = match (cfg.m_z, cfg.m_z_prime) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err("m_z and m_z_prime are required".to_string()),
            };
            nonuniform_full_scan(&u, m_z, m_z_prime, &grid, cfg.samples, cfg.seed)
        }
        other => return Err(format!("unknown scan kind '{other}'")),
    }
    .map_err(stringify)?;
    serde_json::to_string(&summary).map_err(stringify)
}

fn histogram_impl(config: &str) -> Result<String, String> {
    let cfg: HistogramConfig = serde_json::from_str(config).map_err(stringify)?;
    let u = operator(cfg.n, cfg.coupling, cfg.h, cfg.b)?;
    let dim = u.dim();
    let z = Complex64::new(cfg.theta.cos(), 0.0);
    let reference = (z.norm() < 1e-12)
        .then_some(move |s: f64| kumaraswamy_cdf(s.clamp(0.0, 1.0), dim).unwrap());
    let histogram = histogram_transition(
        &u,
        z,
        cfg.samples.max(100),
        cfg.bins.max(1),
        cfg.seed,
        reference
            .as_ref()
            .map(|f| f as &(dyn Fn(f64) -> f64 + Sync)),
        false,
    )
    .map_err(stringify)?;

    let top = *histogram.bin_edges.last().unwrap_or(&1.0);
    let pdf_overlay: Vec<[f64; 2]> = (0..=200)
        .map(|i| {
            let s = top * i as f64 / 200.0;
            [s, kumaraswamy_pdf(s.clamp(0.0, 1.0), dim).unwrap_or(0.0)]
        })
        .collect();
    serde_json::to_string(&HistogramPayload {
        histogram,
        pdf_overlay,
        dim,
    })
    .map_err(stringify)
}

fn form_factor_impl(config: &str) -> Result<String, String> {
    let cfg: FormFactorConfig = serde_json::from_str(config).map_err(stringify)?;
    let u = operator(cfg.n, cfg.coupling, cfg.h, cfg.b)?;
    let t: Vec<usize> = (0..=cfg.t_max).collect();
    let k: Vec<f64> = t.iter().map(|&t| form_factor(&u, t)).collect();
    serde_json::to_string(&FormFactorPayload { t, k, dim: u.dim() }).map_err(stringify)
}

/// Run a θ-scan and return the records plus run diagnostics as JSON.
#[wasm_bindgen]
pub fn scan_json(config: &str) -> Result<String, JsValue> {
    scan_impl(config).map_err(|e| JsValue::from_str(&e))
}

/// Histogram of transition probabilities at fixed overlap angle, with the
/// analytic overlay for θ = π/2.
#[wasm_bindgen]
pub fn histogram_json(config: &str) -> Result<String, JsValue> {
    histogram_impl(config).map_err(|e| JsValue::from_str(&e))
}

/// Spectral form factor K(T) for T = 0..t_max.
#[wasm_bindgen]
pub fn form_factor_json(config: &str) -> Result<String, JsValue> {
    form_factor_impl(config).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scan_payload_parses_back() {
        let config = r#"{"kind":"fixed","n":4,"J":0.785398,"h":0.628318,"b":0.785398,
                         "points":5,"samples":200,"seed":3}"#;
        let payload = scan_impl(config).unwrap();
        let value: serde_json::Value = serde_json::from_str(&payload).unwrap();
        assert_eq!(value["records"].as_array().unwrap().len(), 5);
        assert!(value["k1"].as_f64().unwrap() >= 0.0);
    }

    #[test]
    fn histogram_payload_has_overlay() {
        let config = r#"{"n":4,"J":0.0,"h":0.0,"b":0.785398,
                         "theta":1.5707963267948966,"samples":500,"bins":20,"seed":5}"#;
        let payload = histogram_impl(config).unwrap();
        let value: serde_json::Value = serde_json::from_str(&payload).unwrap();
        assert_eq!(value["counts"].as_array().unwrap().len(), 20);
        assert_eq!(value["pdf_overlay"].as_array().unwrap().len(), 201);
        assert!(value["ks_statistic"].as_f64().is_some());
    }

    #[test]
    fn form_factor_payload() {
        let config = r#"{"n":4,"J":0.0,"h":0.0,"b":0.7853981633974483,"t_max":4}"#;
        let payload = form_factor_impl(config).unwrap();
        let value: serde_json::Value = serde_json::from_str(&payload).unwrap();
        let k = value["k"].as_array().unwrap();
        assert_eq!(k.len(), 5);
        assert!((k[0].as_f64().unwrap() - 16.0).abs() < 1e-12);
        assert!((k[1].as_f64().unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn bad_configs_are_reported() {
        assert!(scan_impl("{}").is_err());
        assert!(scan_impl(
            r#"{"kind":"nope","n":4,"J":0,"h":0,"b":0,"points":3,"samples":100,"seed":1}"#
        )
        .is_err());
    }
}
