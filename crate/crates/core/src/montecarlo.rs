//! Seeded Monte Carlo estimators for Hilbert-space averages.
//!
//! Every trial runs on its own counter-based substream (see [`crate::rng`]),
//! and reduction is an ordered fold over trial indices, so results are
//! bit-identical for any worker count — including the serial build without
//! the `parallel` feature.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::closedform::MomentReport;
use crate::ensembles::Deformation;
use crate::linalg::{inner, LinearOperator};
use crate::rng::substream;
use crate::statespace::{
    deformed_fixed_overlap_state, fixed_overlap_state, sample_haar, OverlapSpec, PureState,
};
use crate::{Error, Result};

/// Summary statistics of a scalar Monte Carlo estimate.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct EstimatorResult {
    pub n_samples: usize,
    pub mean: f64,
    /// Sample standard deviation (Bessel corrected).
    pub std_dev: f64,
    /// Standard error of the mean, std_dev/√n.
    pub std_error: f64,
    /// Raw values, retained on request (e.g. for exact KS statistics).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<f64>>,
}

impl EstimatorResult {
    fn from_values(values: Vec<f64>, retain: bool) -> Self {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let variance = if n > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        let std_dev = variance.sqrt();
        EstimatorResult {
            n_samples: n,
            mean,
            std_dev,
            std_error: std_dev / (n as f64).sqrt(),
            samples: retain.then_some(values),
        }
    }
}

/// Histogram of transition probabilities with moments and an optional
/// goodness-of-fit statistic against a supplied CDF.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct HistogramResult {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub n_samples: usize,
    pub moments: MomentReport,
    /// Two-sided Kolmogorov–Smirnov statistic vs the supplied CDF, computed
    /// on the raw samples, not the bins.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks_statistic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<f64>>,
}

/// Whether the reference state is fixed for the whole experiment or drawn
/// fresh every trial.
#[derive(Clone, Copy)]
pub enum ChiMode<'a> {
    Fixed(&'a PureState),
    Resample,
}

/// State ensembles understood by [`estimate_generic`].
#[derive(Clone, Copy)]
pub enum SamplerSpec<'a> {
    /// Haar-uniform normalized states.
    Haar { dim: usize },
    /// Λ|ψ⟩ for Haar |ψ⟩; not normalized.
    DeformedHaar { deformation: &'a Deformation },
}

/// Runs trials on per-trial substreams and collects values in trial order.
fn collect_values<F>(n_samples: usize, seed: u64, trial: F) -> Result<Vec<f64>>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
{
    #[cfg(feature = "parallel")]
    {
        (0..n_samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = substream(seed, i as u64);
                trial(&mut rng)
            })
            .collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n_samples)
            .map(|i| {
                let mut rng = substream(seed, i as u64);
                trial(&mut rng)
            })
            .collect()
    }
}

/// One trial of the fixed-overlap transition probability, covering the
/// uniform, ψ-deformed and doubly deformed ensembles.
///
/// With a deformation Λ′ on the reference side, the measured amplitude is
/// `⟨χ|Λ′ A (Λ)|ψ⟩` where the overlap constraint is anchored to the
/// normalized ray of Λ′|χ⟩; the unnormalized Λ′|χ⟩ enters the value itself.
fn transition_trial(
    op: &dyn LinearOperator,
    chi_mode: ChiMode<'_>,
    lambda: Option<&Deformation>,
    lambda_prime: Option<&Deformation>,
    spec: &OverlapSpec,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let dim = op.dim();
    let sampled;
    let chi: &PureState = match chi_mode {
        ChiMode::Fixed(state) => {
            if state.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: state.dim(),
                    right: dim,
                });
            }
            state
        }
        ChiMode::Resample => {
            sampled = sample_haar(dim, rng)?;
            &sampled
        }
    };

    let (bra, reference): (Vec<Complex64>, PureState) = match lambda_prime {
        None => (chi.amplitudes().to_vec(), chi.clone()),
        Some(lp) => {
            let tilde = lp.apply(chi.amplitudes());
            let hat = PureState::from_unnormalized(tilde.clone())?;
            (tilde, hat)
        }
    };

    let ket = match lambda {
        None => fixed_overlap_state(&reference, spec, rng)?
            .amplitudes()
            .to_vec(),
        Some(l) => {
            let psi = deformed_fixed_overlap_state(&reference, l, spec, rng)?;
            l.apply(psi.amplitudes())
        }
    };

    let image = op.apply(&ket);
    Ok(inner(&bra, &image).norm_sqr())
}

/// Monte Carlo estimate of the fixed-overlap transition probability.
#[allow(clippy::too_many_arguments)]
pub fn estimate_fixed_overlap(
    op: &dyn LinearOperator,
    chi_mode: ChiMode<'_>,
    lambda: Option<&Deformation>,
    lambda_prime: Option<&Deformation>,
    z: Complex64,
    n_samples: usize,
    seed: u64,
    retain: bool,
) -> Result<EstimatorResult> {
    if n_samples < 1 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let spec = OverlapSpec::new(z)?;
    let values = collect_values(n_samples, seed, |rng| {
        transition_trial(op, chi_mode, lambda, lambda_prime, &spec, rng)
    })?;
    Ok(EstimatorResult::from_values(values, retain))
}

/// Monte Carlo estimate of an arbitrary state functional.
pub fn estimate_generic<F>(
    f: F,
    sampler: SamplerSpec<'_>,
    n_samples: usize,
    seed: u64,
) -> Result<EstimatorResult>
where
    F: Fn(&[Complex64]) -> f64 + Sync,
{
    if n_samples < 1 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let values = collect_values(n_samples, seed, |rng| match sampler {
        SamplerSpec::Haar { dim } => {
            let psi = sample_haar(dim, rng)?;
            Ok(f(psi.amplitudes()))
        }
        SamplerSpec::DeformedHaar { deformation } => {
            let psi = sample_haar(deformation.dim(), rng)?;
            Ok(f(&deformation.apply(psi.amplitudes())))
        }
    })?;
    Ok(EstimatorResult::from_values(values, false))
}

/// Histogram of `|⟨χ|A|ψ⟩|²` over independent pairs with `|⟨χ|ψ⟩| = |z|`,
/// with moments from the raw samples and an optional KS statistic against
/// a reference CDF.
pub fn histogram_transition(
    op: &dyn LinearOperator,
    z: Complex64,
    n_samples: usize,
    n_bins: usize,
    seed: u64,
    reference_cdf: Option<&(dyn Fn(f64) -> f64 + Sync)>,
    retain: bool,
) -> Result<HistogramResult> {
    if n_samples < 100 {
        return Err(Error::InvalidArgument(
            "histograms need at least 100 samples".into(),
        ));
    }
    if n_bins == 0 {
        return Err(Error::InvalidArgument("need at least one bin".into()));
    }
    let spec = OverlapSpec::new(z)?;
    let values = collect_values(n_samples, seed, |rng| {
        transition_trial(op, ChiMode::Resample, None, None, &spec, rng)
    })?;

    let max_value = values.iter().cloned().fold(0.0, f64::max);
    let range = if max_value > 0.0 { max_value } else { 1.0 };
    let bin_edges: Vec<f64> = (0..=n_bins)
        .map(|i| range * i as f64 / n_bins as f64)
        .collect();
    let mut counts = vec![0u64; n_bins];
    for &v in &values {
        let index = ((v / range * n_bins as f64) as usize).min(n_bins - 1);
        counts[index] += 1;
    }

    let moments = sample_moments(&values);
    let ks_statistic = reference_cdf.map(|cdf| ks_statistic(&values, cdf));

    Ok(HistogramResult {
        bin_edges,
        counts,
        n_samples,
        moments,
        ks_statistic,
        samples: retain.then_some(values),
    })
}

/// Mean, Bessel-corrected variance, and standardized skewness/kurtosis of a
/// sample.
pub fn sample_moments(values: &[f64]) -> MomentReport {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let mut m2 = 0.0;
    let mut m3 = 0.0;
    let mut m4 = 0.0;
    for &v in values {
        let d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    let variance = if values.len() > 1 {
        m2 / (n - 1.0)
    } else {
        0.0
    };
    let pop_var = m2 / n;
    MomentReport {
        mean,
        variance,
        skewness: (m3 / n) / pop_var.powf(1.5),
        kurtosis: (m4 / n) / (pop_var * pop_var),
    }
}

/// Two-sided Kolmogorov–Smirnov statistic of a sample against a CDF.
pub fn ks_statistic(values: &[f64], cdf: &dyn Fn(f64) -> f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut worst = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let above = (i as f64 + 1.0) / n - f;
        let below = f - i as f64 / n;
        worst = worst.max(above).max(below);
    }
    worst
}
