//! Pure-state sampling and fixed-overlap constructions.
//!
//! States come in three flavours: Haar-uniform on the unit sphere of C^N,
//! states with a preset overlap `⟨χ|ψ⟩ = z` to a reference `|χ⟩`, and the
//! deformed analogue where `Λ = √(Nρ)` tilts the ensemble towards the
//! eigenspaces favoured by `ρ`. The overlap constraint is enforced
//! constructively, never by rejection: a uniformly random state in the
//! orthogonal complement of `|χ⟩` is mixed in with weight `√(1−|z|²)`.

use num_complex::Complex64;
use rand::Rng;

use crate::ensembles::Deformation;
use crate::linalg::{inner, norm, LinearOperator};
use crate::rng::complex_gaussian;
use crate::{Error, Result};

/// Norm tolerance for exact algebraic identities.
pub const NORM_TOL: f64 = 1e-12;

const MAX_RESAMPLE_ATTEMPTS: usize = 100;

/// A normalized pure state in C^N.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Wrap amplitudes that are already normalized to within `1e-12`.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidDimension {
                dim: amplitudes.len(),
            });
        }
        let n = norm(&amplitudes);
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Self { amplitudes })
    }

    /// Normalize and wrap an arbitrary nonzero vector.
    pub fn from_unnormalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::InvalidDimension {
                dim: amplitudes.len(),
            });
        }
        let n = norm(&amplitudes);
        if n < 1e-150 {
            return Err(Error::Numeric("cannot normalize the zero vector".into()));
        }
        for a in amplitudes.iter_mut() {
            *a /= n;
        }
        Ok(Self { amplitudes })
    }

    /// Computational basis state |k⟩.
    pub fn basis_state(dim: usize, k: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension { dim });
        }
        if k >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {k} out of range for dim {dim}"
            )));
        }
        let mut amplitudes = vec![Complex64::ZERO; dim];
        amplitudes[k] = Complex64::ONE;
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &PureState) -> Complex64 {
        inner(&self.amplitudes, &other.amplitudes)
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amplitudes)
    }
}

/// A preset overlap `z = ⟨χ|ψ⟩` inside the unit circle, with the associated
/// angle `θ = arccos |z|` between the states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapSpec {
    z: Complex64,
}

impl OverlapSpec {
    pub fn new(z: Complex64) -> Result<Self> {
        if z.norm() > 1.0 + 1e-12 {
            return Err(Error::Domain(format!("|z| = {} exceeds 1", z.norm())));
        }
        // Clamp roundoff so cos θ stays in range.
        let z = if z.norm() > 1.0 { z / z.norm() } else { z };
        Ok(Self { z })
    }

    /// Real overlap |z| = cos θ.
    pub fn from_theta(theta: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&theta) {
            return Err(Error::Domain(format!("theta = {theta} outside [0, π/2]")));
        }
        Self::new(Complex64::new(theta.cos(), 0.0))
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn abs_z(&self) -> f64 {
        self.z.norm()
    }

    pub fn theta(&self) -> f64 {
        self.z.norm().min(1.0).acos()
    }
}

/// Haar-uniform state: i.i.d. standard complex Gaussian amplitudes followed
/// by normalization. Unitary invariance of the Gaussian measure is exactly
/// the Haar property.
pub fn sample_haar<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<PureState> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim });
    }
    let amplitudes: Vec<Complex64> = (0..dim).map(|_| complex_gaussian(rng)).collect();
    PureState::from_unnormalized(amplitudes)
}

/// Uniformly random unit vector in the orthogonal complement of `chi`:
/// a Haar draw `|ξ⟩` projected off `|χ⟩` and renormalized. Draws that are
/// numerically collinear with `chi` are rejected and repeated.
pub fn orthogonal_complement_sample<R: Rng + ?Sized>(
    chi: &PureState,
    rng: &mut R,
) -> Result<PureState> {
    for _ in 0..MAX_RESAMPLE_ATTEMPTS {
        let xi = sample_haar(chi.dim(), rng)?;
        let overlap = chi.overlap(&xi);
        let residual = 1.0 - overlap.norm_sqr();
        if residual < 1e-12 {
            continue;
        }
        let scale = residual.sqrt();
        let amplitudes: Vec<Complex64> = xi
            .amplitudes()
            .iter()
            .zip(chi.amplitudes())
            .map(|(x, c)| (x - overlap * c) / scale)
            .collect();
        return PureState::from_unnormalized(amplitudes);
    }
    Err(Error::DegenerateSampling {
        attempts: MAX_RESAMPLE_ATTEMPTS,
    })
}

/// State with exact preset overlap: `|ψ⟩ = z|χ⟩ + √(1−|z|²)|χ⟩⊥`.
///
/// All closed forms depend on `|z|` only; the phase of `z` rides on the
/// `|χ⟩` coefficient so that `⟨χ|ψ⟩ = z` holds exactly.
pub fn fixed_overlap_state<R: Rng + ?Sized>(
    chi: &PureState,
    spec: &OverlapSpec,
    rng: &mut R,
) -> Result<PureState> {
    let perp = orthogonal_complement_sample(chi, rng)?;
    let z = spec.z();
    let tangent = (1.0 - z.norm_sqr()).max(0.0).sqrt();
    let amplitudes: Vec<Complex64> = chi
        .amplitudes()
        .iter()
        .zip(perp.amplitudes())
        .map(|(c, p)| z * c + tangent * p)
        .collect();
    PureState::new(amplitudes)
}

/// State with preset normalized overlap to a deformed reference:
/// `|ψ⟩ = z·ĉ + √(1−|z|²)·|τ⟩` with `ĉ = Λ|χ⟩/‖Λ|χ⟩‖` and `|τ⟩` uniform in
/// the orthogonal complement of ĉ.
///
/// This samples exactly the uniform measure on the constraint surface
/// `⟨χ|Λ|ψ⟩/√⟨χ|Λ²|χ⟩ = z`, `‖ψ‖ = 1` — the ensemble whose averages the
/// deformed closed forms describe. Mixing in `Λ⁻¹|χ⟩⊥/‖Λ⁻¹|χ⟩⊥‖` instead
/// would land on the same surface but with a tangent density skewed by the
/// deformation, which measurably biases the averages once Λ is far from 1.
/// Requires an invertible deformation.
pub fn deformed_fixed_overlap_state<R: Rng + ?Sized>(
    chi: &PureState,
    lambda: &Deformation,
    spec: &OverlapSpec,
    rng: &mut R,
) -> Result<PureState> {
    if chi.dim() != lambda.dim() {
        return Err(Error::DimensionMismatch {
            left: chi.dim(),
            right: lambda.dim(),
        });
    }
    if !lambda.is_invertible() {
        return Err(Error::SingularDeformation {
            p_min: lambda.p_min(),
        });
    }
    let radial = PureState::from_unnormalized(lambda.apply(chi.amplitudes()))?;
    let tangent = orthogonal_complement_sample(&radial, rng)?;
    let z = spec.z();
    let weight = (1.0 - z.norm_sqr()).max(0.0).sqrt();
    let amplitudes: Vec<Complex64> = radial
        .amplitudes()
        .iter()
        .zip(tangent.amplitudes())
        .map(|(r, t)| z * r + weight * t)
        .collect();
    PureState::new(amplitudes)
}

/// Transition probability |⟨χ|A|ψ⟩|².
pub fn transition_probability(
    chi: &PureState,
    op: &dyn LinearOperator,
    psi: &PureState,
) -> Result<f64> {
    if chi.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            left: chi.dim(),
            right: psi.dim(),
        });
    }
    if op.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            left: op.dim(),
            right: psi.dim(),
        });
    }
    let image = op.apply(psi.amplitudes());
    Ok(inner(chi.amplitudes(), &image).norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random_unitary, IdentityOp};
    use crate::rng::substream;

    fn mean_stderr(values: &[f64]) -> (f64, f64) {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, (var / n).sqrt())
    }

    #[test]
    fn haar_sample_is_normalized() {
        let mut rng = substream(1, 0);
        let psi = sample_haar(4, &mut rng).unwrap();
        assert!((psi.norm() - 1.0).abs() < NORM_TOL);
    }

    #[test]
    fn haar_rejects_small_dimension() {
        let mut rng = substream(1, 0);
        assert!(matches!(
            sample_haar(1, &mut rng),
            Err(Error::InvalidDimension { dim: 1 })
        ));
    }

    #[test]
    fn haar_component_mean_is_one_over_dim() {
        let mut rng = substream(2, 0);
        let values: Vec<f64> = (0..100_000)
            .map(|_| sample_haar(4, &mut rng).unwrap().amplitudes()[0].norm_sqr())
            .collect();
        let (mean, se) = mean_stderr(&values);
        assert!((mean - 0.25).abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn haar_invariance_under_fixed_unitary() {
        let mut rng = substream(3, 0);
        let v = random_unitary(4, &mut rng).unwrap();
        let e0 = PureState::basis_state(4, 0).unwrap();
        let values: Vec<f64> = (0..100_000)
            .map(|_| {
                let psi = sample_haar(4, &mut rng).unwrap();
                transition_probability(&e0, &v, &psi).unwrap()
            })
            .collect();
        let (mean, se) = mean_stderr(&values);
        assert!((mean - 0.25).abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn complement_in_dim_two_is_the_other_ray() {
        let mut rng = substream(4, 0);
        let chi = PureState::basis_state(2, 0).unwrap();
        let perp = orthogonal_complement_sample(&chi, &mut rng).unwrap();
        let e1 = PureState::basis_state(2, 1).unwrap();
        assert!((e1.overlap(&perp).norm() - 1.0).abs() < NORM_TOL);
    }

    #[test]
    fn complement_is_orthonormal() {
        let mut rng = substream(5, 0);
        let chi = sample_haar(8, &mut rng).unwrap();
        let perp = orthogonal_complement_sample(&chi, &mut rng).unwrap();
        assert!(chi.overlap(&perp).norm() < NORM_TOL);
        assert!((perp.norm() - 1.0).abs() < NORM_TOL);
    }

    #[test]
    fn complement_component_mean_matches_reduced_dimension() {
        // For chi = e0 in dim 4, the complement is Haar on a 3-dim space.
        let mut rng = substream(6, 0);
        let chi = PureState::basis_state(4, 0).unwrap();
        let values: Vec<f64> = (0..100_000)
            .map(|_| {
                let perp = orthogonal_complement_sample(&chi, &mut rng).unwrap();
                perp.amplitudes()[1].norm_sqr()
            })
            .collect();
        let (mean, se) = mean_stderr(&values);
        assert!((mean - 1.0 / 3.0).abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn fixed_overlap_endpoints() {
        let mut rng = substream(7, 0);
        let chi = sample_haar(16, &mut rng).unwrap();

        let aligned = OverlapSpec::new(Complex64::ONE).unwrap();
        let psi = fixed_overlap_state(&chi, &aligned, &mut rng).unwrap();
        assert!((chi.overlap(&psi).norm() - 1.0).abs() < NORM_TOL);

        let orthogonal = OverlapSpec::new(Complex64::ZERO).unwrap();
        let psi = fixed_overlap_state(&chi, &orthogonal, &mut rng).unwrap();
        assert!(chi.overlap(&psi).norm() < NORM_TOL);
    }

    #[test]
    fn fixed_overlap_hits_preset_value() {
        let mut rng = substream(8, 0);
        let chi = sample_haar(16, &mut rng).unwrap();
        let spec = OverlapSpec::new(Complex64::new(0.6, 0.0)).unwrap();
        let psi = fixed_overlap_state(&chi, &spec, &mut rng).unwrap();
        assert!((chi.overlap(&psi) - spec.z()).norm() < NORM_TOL);
        assert!((psi.norm() - 1.0).abs() < NORM_TOL);
    }

    #[test]
    fn fixed_overlap_complex_phase_is_exact() {
        let mut rng = substream(9, 0);
        let chi = sample_haar(8, &mut rng).unwrap();
        let z = Complex64::from_polar(0.5, 1.2345);
        let spec = OverlapSpec::new(z).unwrap();
        let psi = fixed_overlap_state(&chi, &spec, &mut rng).unwrap();
        assert!((chi.overlap(&psi) - z).norm() < NORM_TOL);
    }

    #[test]
    fn complement_marginal_matches_haar_on_complement() {
        // With z = 0 the constructed state is the complement draw itself, so
        // |⟨e|ψ⟩|² for fixed e ⊥ χ must average to 1/(N-1).
        let mut rng = substream(10, 0);
        let dim = 8;
        let chi = PureState::basis_state(dim, 0).unwrap();
        let probe = PureState::basis_state(dim, 3).unwrap();
        let spec = OverlapSpec::new(Complex64::ZERO).unwrap();
        let values: Vec<f64> = (0..100_000)
            .map(|_| {
                let psi = fixed_overlap_state(&chi, &spec, &mut rng).unwrap();
                probe.overlap(&psi).norm_sqr()
            })
            .collect();
        let (mean, se) = mean_stderr(&values);
        let expected = 1.0 / (dim - 1) as f64;
        assert!((mean - expected).abs() < 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn transition_probability_endpoints() {
        let mut rng = substream(11, 0);
        let chi = sample_haar(8, &mut rng).unwrap();
        let id = IdentityOp(8);
        assert!((transition_probability(&chi, &id, &chi).unwrap() - 1.0).abs() < NORM_TOL);

        let perp = orthogonal_complement_sample(&chi, &mut rng).unwrap();
        assert!(transition_probability(&chi, &id, &perp).unwrap() < NORM_TOL);

        let u = random_unitary(8, &mut rng).unwrap();
        let psi = sample_haar(8, &mut rng).unwrap();
        let t = transition_probability(&chi, &u, &psi).unwrap();
        assert!((0.0..=1.0 + NORM_TOL).contains(&t));
    }

    #[test]
    fn transition_probability_dimension_mismatch() {
        let mut rng = substream(12, 0);
        let chi = sample_haar(8, &mut rng).unwrap();
        let psi = sample_haar(4, &mut rng).unwrap();
        assert!(matches!(
            transition_probability(&chi, &IdentityOp(8), &psi),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn identical_seed_gives_identical_states() {
        let a = sample_haar(32, &mut substream(99, 5)).unwrap();
        let b = sample_haar(32, &mut substream(99, 5)).unwrap();
        assert_eq!(a.amplitudes(), b.amplitudes());
    }

    #[test]
    fn deformed_state_with_identity_deformation_matches_uniform() {
        // Λ = 1 must reproduce the undeformed construction draw for draw.
        let chi = sample_haar(16, &mut substream(13, 0)).unwrap();
        let lambda = Deformation::identity(16);
        let spec = OverlapSpec::new(Complex64::new(0.4, 0.0)).unwrap();
        let plain = fixed_overlap_state(&chi, &spec, &mut substream(13, 1)).unwrap();
        let deformed =
            deformed_fixed_overlap_state(&chi, &lambda, &spec, &mut substream(13, 1)).unwrap();
        for (a, b) in plain.amplitudes().iter().zip(deformed.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn deformed_state_satisfies_normalized_overlap() {
        let m_z = crate::kicked_ising::build_magnetization(8).unwrap();
        let rho = crate::ensembles::solve_reimann_rho(&m_z, 2.0).unwrap();
        let lambda = crate::ensembles::deformation_from(&rho);
        let mut rng = substream(14, 0);
        let chi = sample_haar(256, &mut rng).unwrap();
        let spec = OverlapSpec::new(Complex64::new(0.5, 0.0)).unwrap();
        let psi = deformed_fixed_overlap_state(&chi, &lambda, &spec, &mut rng).unwrap();
        assert!((psi.norm() - 1.0).abs() < NORM_TOL);
        let lambda_psi = lambda.apply(psi.amplitudes());
        let lambda_sq_chi = lambda.apply_squared(chi.amplitudes());
        let normalized = inner(chi.amplitudes(), &lambda_psi)
            / inner(chi.amplitudes(), &lambda_sq_chi).re.sqrt();
        assert!((normalized - spec.z()).norm() < 1e-10, "{normalized}");
    }

    #[test]
    fn deformed_state_at_unit_overlap_is_the_deformed_ray() {
        let m_z = crate::kicked_ising::build_magnetization(4).unwrap();
        let rho = crate::ensembles::solve_reimann_rho(&m_z, 1.0).unwrap();
        let lambda = crate::ensembles::deformation_from(&rho);
        let mut rng = substream(15, 0);
        let chi = sample_haar(16, &mut rng).unwrap();
        let spec = OverlapSpec::new(Complex64::ONE).unwrap();
        let psi = deformed_fixed_overlap_state(&chi, &lambda, &spec, &mut rng).unwrap();
        let ray = PureState::from_unnormalized(lambda.apply(chi.amplitudes())).unwrap();
        assert!((ray.overlap(&psi).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn deformed_state_rejects_singular_deformation() {
        let mut spectrum = vec![0.0; 8];
        spectrum[0] = 0.6;
        spectrum[1] = 0.4;
        let rho = crate::ensembles::DensityOperator::from_spectrum(spectrum).unwrap();
        let lambda = crate::ensembles::deformation_from(&rho);
        let mut rng = substream(16, 0);
        let chi = sample_haar(8, &mut rng).unwrap();
        let spec = OverlapSpec::new(Complex64::new(0.3, 0.0)).unwrap();
        assert!(matches!(
            deformed_fixed_overlap_state(&chi, &lambda, &spec, &mut rng),
            Err(Error::SingularDeformation { .. })
        ));
    }
}
