//! Output writers. CSV column order is part of the tool's contract:
//! scans emit `theta,abs_z,analytic_mean,analytic_std,mc_mean,mc_std,
//! mc_std_error,n_samples` with floats at 17 significant digits.

use serde::Serialize;
use typicality_core::montecarlo::HistogramResult;
use typicality_core::scan::ScanRecord;

/// 17 significant digits: round-trips any f64 exactly.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{:.16e}", x)
    }
}

pub const SCAN_CSV_HEADER: &str =
    "theta,abs_z,analytic_mean,analytic_std,mc_mean,mc_std,mc_std_error,n_samples";

pub fn scan_csv(records: &[ScanRecord]) -> String {
    let mut out = String::from(SCAN_CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            format_float(r.theta),
            format_float(r.abs_z),
            format_float(r.analytic_mean),
            format_float(r.analytic_std),
            format_float(r.mc_mean),
            format_float(r.mc_std),
            format_float(r.mc_std_error),
            r.n_samples
        ));
    }
    out
}

pub fn histogram_csv(histogram: &HistogramResult) -> String {
    let mut out = String::from("bin_left,bin_right,count\n");
    for (i, &count) in histogram.counts.iter().enumerate() {
        out.push_str(&format!(
            "{},{},{}\n",
            format_float(histogram.bin_edges[i]),
            format_float(histogram.bin_edges[i + 1]),
            count
        ));
    }
    out
}

/// One form-factor value per period count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FormFactorPoint {
    pub t: usize,
    pub k_t: f64,
}

pub fn form_factor_csv(points: &[FormFactorPoint]) -> String {
    let mut out = String::from("t,k_t\n");
    for p in points {
        out.push_str(&format!("{},{}\n", p.t, format_float(p.k_t)));
    }
    out
}

/// Summary of a constructed statistical operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoReport {
    pub m_z: f64,
    pub y: f64,
    pub purity: f64,
    pub effective_dimension: f64,
    pub p_min: f64,
    pub p_max: f64,
}

pub fn rho_csv(report: &RhoReport) -> String {
    format!(
        "m_z,y,purity,effective_dimension,p_min,p_max\n{},{},{},{},{},{}\n",
        format_float(report.m_z),
        format_float(report.y),
        format_float(report.purity),
        format_float(report.effective_dimension),
        format_float(report.p_min),
        format_float(report.p_max),
    )
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable output");
    text.push('\n');
    text
}
