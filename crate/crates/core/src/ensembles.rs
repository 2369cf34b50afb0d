//! Statistical operators with preset expectation values and the deformation Λ.
//!
//! For an observable M with spectrum {E_k} and a target value m strictly
//! inside the spectral range, the statistical operator
//! `ρ(m, M) = (1/N) · 1/(1 + y(m − M))` is fixed by a single real parameter
//! y chosen so that Tr ρ = 1; the preset value Tr Mρ = m then follows
//! automatically. The deformation Λ = √(Nρ) turns Haar-uniform states into
//! an ensemble whose members carry the preset expectation value on average.
//!
//! M_z is diagonal in the computational basis, so ρ and Λ are diagonal and
//! Λ acts as a componentwise scale. The basis handle on [`DensityOperator`]
//! records this; a future non-diagonal observable would work through an
//! eigendecomposition supplied by the caller.

use num_complex::Complex64;

use crate::kicked_ising::MagnetizationObservable;
use crate::linalg::LinearOperator;
use crate::{Error, Result};

/// Eigenvalues below this are treated as non-invertible for Λ⁻¹.
pub const SINGULAR_EIGENVALUE: f64 = 1e-14;

const MAX_BISECTION_ITERATIONS: usize = 200;

/// Eigenbasis handle for diagonal statistical operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EigenBasis {
    /// Diagonal in the computational basis (all observables used here are).
    Computational,
}

/// A statistical operator given by its spectrum in a fixed eigenbasis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    spectrum: Vec<f64>,
    basis: EigenBasis,
    /// The root y of the defining equation, 0 for the fully mixed state.
    y: f64,
}

impl DensityOperator {
    /// Fully mixed state ρ = 1/N.
    pub fn fully_mixed(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension { dim });
        }
        Ok(Self {
            spectrum: vec![1.0 / dim as f64; dim],
            basis: EigenBasis::Computational,
            y: 0.0,
        })
    }

    /// Wraps an explicit spectrum (must be nonnegative and sum to 1).
    pub fn from_spectrum(spectrum: Vec<f64>) -> Result<Self> {
        if spectrum.len() < 2 {
            return Err(Error::InvalidDimension {
                dim: spectrum.len(),
            });
        }
        if spectrum.iter().any(|&p| p < 0.0) {
            return Err(Error::Domain("negative eigenvalue in spectrum".into()));
        }
        let total: f64 = spectrum.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm: total });
        }
        Ok(Self {
            spectrum,
            basis: EigenBasis::Computational,
            y: f64::NAN,
        })
    }

    pub fn dim(&self) -> usize {
        self.spectrum.len()
    }

    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn basis(&self) -> EigenBasis {
        self.basis
    }

    /// The parameter y that produced this operator (NaN when constructed
    /// from an explicit spectrum).
    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn p_min(&self) -> f64 {
        self.spectrum.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn p_max(&self) -> f64 {
        self.spectrum.iter().cloned().fold(0.0, f64::max)
    }

    pub fn trace(&self) -> f64 {
        self.spectrum.iter().sum()
    }

    /// Tr Mρ for a diagonal observable sharing this eigenbasis.
    pub fn expectation_of(&self, diagonal: &[f64]) -> Result<f64> {
        if diagonal.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: diagonal.len(),
                right: self.dim(),
            });
        }
        Ok(self.spectrum.iter().zip(diagonal).map(|(p, e)| p * e).sum())
    }
}

/// Purity P = Tr ρ² ∈ [1/N, 1].
pub fn purity(rho: &DensityOperator) -> f64 {
    rho.spectrum.iter().map(|p| p * p).sum()
}

/// Effective dimension d_eff = 1/P: the number of states effectively mixed.
pub fn effective_dimension(rho: &DensityOperator) -> f64 {
    1.0 / purity(rho)
}

/// Constructs ρ(m, M) for the magnetization observable. Root-finding runs
/// on the (eigenvalue, multiplicity) pairs, so the cost is O(n) per
/// evaluation instead of O(2^n).
pub fn solve_reimann_rho(observable: &MagnetizationObservable, m: f64) -> Result<DensityOperator> {
    let levels = observable.value_multiplicities();
    let y = solve_y(&levels, observable.dim(), m)?;
    finish_rho(&observable.diagonal(), m, y)
}

/// Same construction for an arbitrary diagonal observable. Exactly equal
/// eigenvalues are collapsed to (value, multiplicity) pairs first.
pub fn solve_reimann_rho_diagonal(diagonal: &[f64], m: f64) -> Result<DensityOperator> {
    if diagonal.len() < 2 {
        return Err(Error::InvalidDimension {
            dim: diagonal.len(),
        });
    }
    let mut sorted = diagonal.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("non-finite eigenvalue"));
    let mut levels: Vec<(f64, u64)> = Vec::new();
    for &e in &sorted {
        match levels.last_mut() {
            Some((value, mult)) if *value == e => *mult += 1,
            _ => levels.push((e, 1)),
        }
    }
    let y = solve_y(&levels, diagonal.len(), m)?;
    finish_rho(diagonal, m, y)
}

/// Normalization defect g(y) = (1/N) Σ_k mult_k / (1 + y(m − E_k)) − 1,
/// evaluated as +∞ outside the positivity region.
fn normalization_defect(levels: &[(f64, u64)], dim: usize, m: f64, y: f64) -> f64 {
    let mut sum = 0.0;
    for &(e, mult) in levels {
        let denom = 1.0 + y * (m - e);
        if denom <= 0.0 {
            return f64::INFINITY;
        }
        sum += mult as f64 / denom;
    }
    sum / dim as f64 - 1.0
}

/// Finds the root y of the normalization condition.
///
/// g is strictly convex on the positivity bracket
/// (−1/(m−E_min), 1/(E_max−m)), diverges to +∞ at both ends and always has
/// the trivial root g(0) = 0. The wanted root is the second one, on the
/// side of the target: y > 0 for m above the spectral mean, y < 0 below.
/// A halving scan locates a point with g < 0 on the monotone branch between
/// the minimum and the pole; bisection then runs on that branch.
fn solve_y(levels: &[(f64, u64)], dim: usize, m: f64) -> Result<f64> {
    let e_min = levels.iter().map(|&(e, _)| e).fold(f64::INFINITY, f64::min);
    let e_max = levels
        .iter()
        .map(|&(e, _)| e)
        .fold(f64::NEG_INFINITY, f64::max);
    if !(m > e_min && m < e_max) {
        return Err(Error::OutOfRange {
            value: m,
            min: e_min,
            max: e_max,
        });
    }
    let mean = levels.iter().map(|&(e, mult)| e * mult as f64).sum::<f64>() / dim as f64;
    let spread = e_max - e_min;
    if (m - mean).abs() < 1e-13 * spread {
        return Ok(0.0);
    }

    // Pole of the positivity bracket on the side of the root.
    let limit = if m > mean {
        1.0 / (e_max - m)
    } else {
        -1.0 / (m - e_min)
    };
    let g = |y: f64| normalization_defect(levels, dim, m, y);

    // Halving scan towards 0 for a negative point.
    let mut low = None;
    let mut t = 0.5 * limit;
    for _ in 0..MAX_BISECTION_ITERATIONS {
        if g(t) < 0.0 {
            low = Some(t);
            break;
        }
        t *= 0.5;
    }
    let Some(mut low) = low else {
        return Err(Error::Numeric(
            "no sign change towards y = 0 in the normalization defect".into(),
        ));
    };
    // Scan towards the pole for a positive point.
    let mut high = None;
    let mut back_off = 0.5;
    for _ in 0..MAX_BISECTION_ITERATIONS {
        let u = limit * (1.0 - back_off);
        if g(u) > 0.0 {
            high = Some(u);
            break;
        }
        back_off *= 0.5;
    }
    let Some(mut high) = high else {
        return Err(Error::Numeric(
            "no sign change towards the positivity pole in the normalization defect".into(),
        ));
    };

    debug_assert!(g(low) < 0.0 && g(high) > 0.0);
    let span = limit.abs();
    for _ in 0..MAX_BISECTION_ITERATIONS {
        let mid = 0.5 * (low + high);
        let value = g(mid);
        if value == 0.0 || (high - low).abs() < 1e-15 * span {
            return Ok(mid);
        }
        if value < 0.0 {
            low = mid;
        } else {
            high = mid;
        }
    }
    Err(Error::Numeric(format!(
        "normalization root did not converge within {MAX_BISECTION_ITERATIONS} iterations"
    )))
}

fn finish_rho(diagonal: &[f64], m: f64, y: f64) -> Result<DensityOperator> {
    let dim = diagonal.len();
    let spectrum: Vec<f64> = diagonal
        .iter()
        .map(|&e| 1.0 / (dim as f64 * (1.0 + y * (m - e))))
        .collect();
    if spectrum.iter().any(|&p| p <= 0.0 || p.is_nan()) {
        return Err(Error::Numeric(
            "positivity violated by the normalization root".into(),
        ));
    }
    let trace: f64 = spectrum.iter().sum();
    if (trace - 1.0).abs() > 1e-12 {
        return Err(Error::Numeric(format!(
            "trace defect {} after root-finding",
            trace - 1.0
        )));
    }
    let expectation: f64 = spectrum.iter().zip(diagonal).map(|(p, e)| p * e).sum();
    if (expectation - m).abs() > 1e-10 {
        return Err(Error::Numeric(format!(
            "expectation defect {} after root-finding",
            expectation - m
        )));
    }
    Ok(DensityOperator {
        spectrum,
        basis: EigenBasis::Computational,
        y,
    })
}

/// The deformation Λ = √(Nρ), stored by its eigenvalues √(N p_i).
#[derive(Debug, Clone, PartialEq)]
pub struct Deformation {
    scale: Vec<f64>,
    p_min: f64,
}

/// Builds Λ = √(Nρ) from a statistical operator.
pub fn deformation_from(rho: &DensityOperator) -> Deformation {
    let dim = rho.dim() as f64;
    Deformation {
        scale: rho.spectrum().iter().map(|&p| (dim * p).sqrt()).collect(),
        p_min: rho.p_min(),
    }
}

impl Deformation {
    /// The identity deformation (fully mixed ρ).
    pub fn identity(dim: usize) -> Self {
        Self {
            scale: vec![1.0; dim],
            p_min: 1.0 / dim as f64,
        }
    }

    pub fn dim(&self) -> usize {
        self.scale.len()
    }

    /// Eigenvalues √(N p_i) of Λ.
    pub fn scale(&self) -> &[f64] {
        &self.scale
    }

    pub fn is_invertible(&self) -> bool {
        self.p_min > SINGULAR_EIGENVALUE
    }

    /// Smallest eigenvalue of the source statistical operator.
    pub fn p_min(&self) -> f64 {
        self.p_min
    }

    /// Λ v (componentwise in the eigenbasis).
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.scale.len(), "state dimension mismatch");
        v.iter().zip(&self.scale).map(|(x, &s)| x * s).collect()
    }

    /// Λ⁻¹ v; fails when any ρ eigenvalue is at or below the singular cutoff.
    pub fn apply_inverse(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if !self.is_invertible() {
            return Err(Error::SingularDeformation { p_min: self.p_min });
        }
        assert_eq!(v.len(), self.scale.len(), "state dimension mismatch");
        Ok(v.iter().zip(&self.scale).map(|(x, &s)| x / s).collect())
    }

    /// Λ² v = Nρ v.
    pub fn apply_squared(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.scale.len(), "state dimension mismatch");
        v.iter()
            .zip(&self.scale)
            .map(|(x, &s)| x * (s * s))
            .collect()
    }

    /// Diagonal of Λ² as reals.
    pub fn squared_diagonal(&self) -> Vec<f64> {
        self.scale.iter().map(|&s| s * s).collect()
    }
}

impl LinearOperator for Deformation {
    fn dim(&self) -> usize {
        self.scale.len()
    }
    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        Deformation::apply(self, v)
    }
    fn apply_adjoint(&self, v: &[Complex64]) -> Vec<Complex64> {
        Deformation::apply(self, v)
    }
}
