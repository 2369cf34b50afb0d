//! Closed-form Hilbert-space averages and variances.
//!
//! Conventions: HA[f] is the mean of f over normalized states with the
//! unitarily invariant (Haar) measure, HV[f] = HA[f²] − HA[f]². The fixed
//! overlap `⟨χ|ψ⟩ = z` enters every formula through |z| alone, and `N`
//! denotes the Hilbert space dimension. Formulas marked "deformed" refer to
//! the nonuniform ensemble `|ψ⟩ → Λ|ψ⟩` with `Λ = √(Nρ)`, where the overlap
//! constraint is normalized by `√⟨χ|Λ²|χ⟩`.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::ensembles::{Deformation, DensityOperator};
use crate::linalg::{inner, trace_a_adjoint, trace_a_adjoint_squared, CMatrix, LinearOperator};
use crate::statespace::PureState;
use crate::{Error, Result};

/// Maximum number of matrix-element factors in [`moment_product`]; the
/// cycle sum grows factorially.
pub const MOMENT_PRODUCT_CAP: usize = 6;

/// Validity window for the geometric-series expansion parameter N·Tr ρρ′.
pub const EXPANSION_GATE: (f64, f64) = (0.5, 1.5);

/// Negative variance values above this floor are cancellation noise and are
/// reported as zero; anything below it is a logic error.
pub const VARIANCE_FLOOR: f64 = -1e-12;

/// Coefficients of the fixed-overlap variance in the monomials
/// `x² , x·y , y²` with `x = ⟨χ|AA†|χ⟩` and `y = |⟨χ|A|χ⟩|²`.
/// They are rational in N and |z| and sum to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaCoefficients {
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
}

impl LambdaCoefficients {
    pub fn sum(&self) -> f64 {
        self.lambda1 + self.lambda2 + self.lambda3
    }
}

/// First four standardized moments of a distribution. Skewness and kurtosis
/// are NaN (null in JSON) for a degenerate sample.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MomentReport {
    pub mean: f64,
    pub variance: f64,
    #[serde(serialize_with = "crate::jsonnum::nan_as_null")]
    pub skewness: f64,
    #[serde(serialize_with = "crate::jsonnum::nan_as_null")]
    pub kurtosis: f64,
}

/// Clamp cancellation noise out of a variance value.
///
/// Values in [−1e-12, 0) report as 0; anything lower trips the assertion.
pub fn clamp_variance(value: f64) -> f64 {
    assert!(
        value >= VARIANCE_FLOOR,
        "variance {value} below the numerical floor"
    );
    value.max(0.0)
}

/// HA[⟨ψ|M|ψ⟩] = Tr M / N.
pub fn ha_expectation(trace_m: Complex64, dim: usize) -> Complex64 {
    trace_m / dim as f64
}

/// HV[⟨ψ|M|ψ⟩] = (Tr M²/N − Tr²M/N²)/(N+1) for Hermitian M.
pub fn hv_expectation(trace_m: f64, trace_m_sq: f64, dim: usize) -> f64 {
    let n = dim as f64;
    clamp_variance((trace_m_sq / n - trace_m * trace_m / (n * n)) / (n + 1.0))
}

/// ⟨χ|AA†|χ⟩ = ‖A†χ‖².
pub fn gram_element(chi: &PureState, a: &dyn LinearOperator) -> f64 {
    let adj = a.apply_adjoint(chi.amplitudes());
    adj.iter().map(|x| x.norm_sqr()).sum()
}

/// ⟨χ|A|χ⟩.
pub fn diagonal_element(chi: &PureState, a: &dyn LinearOperator) -> Complex64 {
    inner(chi.amplitudes(), &a.apply(chi.amplitudes()))
}

/// HA_ψ[|⟨χ|A|ψ⟩|²] = ⟨χ|AA†|χ⟩ / N.
pub fn ha_transition_uniform(chi: &PureState, a: &dyn LinearOperator) -> Result<f64> {
    if chi.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: chi.dim(),
            right: a.dim(),
        });
    }
    Ok(gram_element(chi, a) / chi.dim() as f64)
}

/// HA_{ψ,χ}[|⟨χ|A|ψ⟩|²] = Tr AA† / N².
pub fn ha_transition_both(trace_a_adjoint: f64, dim: usize) -> f64 {
    let n = dim as f64;
    trace_a_adjoint / (n * n)
}

/// HA_{ψ,χ}[|⟨χ|Λ′AΛ|ψ⟩|²] = Tr ρ′AρA† for both states deformed.
pub fn ha_transition_deformed(
    rho: &DensityOperator,
    rho_prime: &DensityOperator,
    a: &dyn LinearOperator,
) -> Result<f64> {
    let dim = a.dim();
    if rho.dim() != dim || rho_prime.dim() != dim {
        return Err(Error::DimensionMismatch {
            left: rho.dim(),
            right: dim,
        });
    }
    let mut basis = vec![Complex64::ZERO; dim];
    let mut total = 0.0;
    for (k, &p_k) in rho.spectrum().iter().enumerate() {
        basis[k] = Complex64::ONE;
        let col = a.apply(&basis);
        basis[k] = Complex64::ZERO;
        let weighted: f64 = col
            .iter()
            .zip(rho_prime.spectrum())
            .map(|(x, &p)| p * x.norm_sqr())
            .sum();
        total += p_k * weighted;
    }
    Ok(total)
}

/// HV_ψ[|⟨χ|A|ψ⟩|²] = (N−1)/(N²(N+1)) · ⟨χ|AA†|χ⟩².
pub fn hv_transition_uniform(chi: &PureState, a: &dyn LinearOperator) -> Result<f64> {
    if chi.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: chi.dim(),
            right: a.dim(),
        });
    }
    let n = chi.dim() as f64;
    let x = gram_element(chi, a);
    Ok(clamp_variance((n - 1.0) / (n * n * (n + 1.0)) * x * x))
}

/// HV_{ψ,χ}[|⟨χ|A|ψ⟩|²] = (N−1)/(N³(N+1)²) · (Tr (AA†)² + Tr² AA†).
///
/// This is the χ-average of the one-state variance; it equals the total
/// variance over independent pairs exactly when AA† ∝ 1 (in particular for
/// unitary A). For general A the total variance carries, in addition, the
/// spread of the conditional mean, (N·Tr (AA†)² − Tr² AA†)/(N⁴(N+1)).
pub fn hv_transition_both(a: &dyn LinearOperator) -> f64 {
    let n = a.dim() as f64;
    let t1 = trace_a_adjoint_squared(a);
    let t2 = trace_a_adjoint(a);
    clamp_variance((n - 1.0) / (n.powi(3) * (n + 1.0).powi(2)) * (t1 + t2 * t2))
}

/// Mean of the fixed-overlap transition probability from its two matrix
/// elements: `(1−|z|²)/(N−1) · x + (N|z|²−1)/(N−1) · y`.
pub fn fixed_overlap_mean_parts(x: f64, y: f64, abs_z: f64, dim: usize) -> f64 {
    let n = dim as f64;
    let w = abs_z * abs_z;
    (1.0 - w) / (n - 1.0) * x + (n * w - 1.0) / (n - 1.0) * y
}

/// Variance of the fixed-overlap transition probability from its two matrix
/// elements, `λ1 x² + λ2 x y + λ3 y²`.
pub fn fixed_overlap_variance_parts(x: f64, y: f64, abs_z: f64, dim: usize) -> f64 {
    let c = lambda_coefficients(abs_z, dim);
    clamp_variance(c.lambda1 * x * x + c.lambda2 * x * y + c.lambda3 * y * y)
}

/// HA_ψ[|⟨χ|A|ψ⟩|² δ(⟨χ|ψ⟩−z)] for fixed `|χ⟩`; depends on z through |z|.
pub fn ha_fixed_overlap(chi: &PureState, a: &dyn LinearOperator, z: Complex64) -> Result<f64> {
    if chi.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: chi.dim(),
            right: a.dim(),
        });
    }
    let x = gram_element(chi, a);
    let y = diagonal_element(chi, a).norm_sqr();
    Ok(fixed_overlap_mean_parts(x, y, z.norm(), chi.dim()))
}

/// HV_ψ[|⟨χ|A|ψ⟩|² δ(⟨χ|ψ⟩−z)] for fixed `|χ⟩`.
pub fn hv_fixed_overlap(chi: &PureState, a: &dyn LinearOperator, z: Complex64) -> Result<f64> {
    if chi.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: chi.dim(),
            right: a.dim(),
        });
    }
    let x = gram_element(chi, a);
    let y = diagonal_element(chi, a).norm_sqr();
    Ok(fixed_overlap_variance_parts(x, y, z.norm(), chi.dim()))
}

/// The rational coefficients of the fixed-overlap variance.
pub fn lambda_coefficients(abs_z: f64, dim: usize) -> LambdaCoefficients {
    let n = dim as f64;
    let w = abs_z * abs_z;
    let a = (1.0 - w) * (1.0 - w);
    let b = (1.0 - w) * w;
    let lambda1 = 2.0 * a / (n * (n - 1.0)) - a / ((n - 1.0) * (n - 1.0));
    let lambda2 =
        2.0 * a / ((n - 1.0) * (n - 1.0)) + 2.0 * b / (n - 1.0) - 4.0 * a / (n * (n - 1.0));
    let lambda3 = 2.0 * a / (n * (n - 1.0)) - a / ((n - 1.0) * (n - 1.0)) - 2.0 * b / (n - 1.0);
    LambdaCoefficients {
        lambda1,
        lambda2,
        lambda3,
    }
}

/// HA_{ψ,χ}[|⟨χ|A|ψ⟩|² δ(⟨χ|ψ⟩−z)] from the traces of A:
/// `(N−|z|²)/(N³−N) · Tr AA† + (N|z|²−1)/(N³−N) · |Tr A|²`.
pub fn ha_fixed_overlap_both(
    trace_a_adjoint: f64,
    trace_a: Complex64,
    z: Complex64,
    dim: usize,
) -> f64 {
    let n = dim as f64;
    let w = z.norm_sqr();
    let denom = n * n * n - n;
    (n - w) / denom * trace_a_adjoint + (n * w - 1.0) / denom * trace_a.norm_sqr()
}

/// Unitary specialization of the both-states average, through the spectral
/// form factor: `(N−|z|²)/(N²−1) + (N|z|²−1)/(N²−1) · K(1)`.
pub fn ha_fixed_overlap_both_unitary(k1: f64, z: Complex64, dim: usize) -> f64 {
    let n = dim as f64;
    let w = z.norm_sqr();
    ((n - w) + (n * w - 1.0) * k1) / (n * n - 1.0)
}

/// HA_χ[|⟨χ|U|χ⟩|²] = (|Tr U|² + N)/(N(N+1)) for unitary U.
pub fn ha_diagonal_second_moment_unitary(trace_u: Complex64, dim: usize) -> f64 {
    let n = dim as f64;
    (trace_u.norm_sqr() + n) / (n * (n + 1.0))
}

/// HA_χ[|⟨χ|U|χ⟩|⁴] for unitary U, from Tr U and Tr U²:
/// `(N−1)!/(N+3)! · (|Tr U|⁴ + 2 Re(Tr U² Tr² U†) + |Tr U²|²
///  + (4N+8)|Tr U|² + 2N² + 6N)`.
pub fn ha_diagonal_fourth_moment_unitary(
    trace_u: Complex64,
    trace_u_sq: Complex64,
    dim: usize,
) -> f64 {
    let n = dim as f64;
    let prefactor = 1.0 / (n * (n + 1.0) * (n + 2.0) * (n + 3.0));
    let t2 = trace_u.norm_sqr();
    let cross = 2.0 * (trace_u_sq * trace_u.conj() * trace_u.conj()).re;
    prefactor
        * (t2 * t2 + cross + trace_u_sq.norm_sqr() + (4.0 * n + 8.0) * t2 + 2.0 * n * n + 6.0 * n)
}

/// HV_{ψ,χ}[|⟨χ|U|ψ⟩|² δ(⟨χ|ψ⟩−z)] for unitary U: the second moment at
/// fixed overlap minus the squared mean, both expressed through Tr U and
/// Tr U².
pub fn hv_fixed_overlap_both_unitary(
    trace_u: Complex64,
    trace_u_sq: Complex64,
    z: Complex64,
    dim: usize,
) -> f64 {
    let n = dim as f64;
    let w = z.norm_sqr();
    let a = (1.0 - w) * (1.0 - w);
    let ha2 = ha_diagonal_second_moment_unitary(trace_u, dim);
    let ha4 = ha_diagonal_fourth_moment_unitary(trace_u, trace_u_sq, dim);
    let second_moment = 2.0 * a / (n * (n - 1.0))
        + (2.0 * a / (n * (n - 1.0)) - 4.0 * (1.0 - w) * w / (n - 1.0) + w * w) * ha4
        + (4.0 * (1.0 - w) * w / (n - 1.0) - 4.0 * a / (n * (n - 1.0))) * ha2;
    let k1 = trace_u.norm_sqr() / n;
    let mean = ha_fixed_overlap_both_unitary(k1, z, dim);
    clamp_variance(second_moment - mean * mean)
}

/// Derivative of the both-states unitary average with respect to |z|:
/// `2|z| (N·K(1) − 1)/(N²−1)`. Positive exactly when K(1) > 1/N.
pub fn slope_fixed_overlap_both(k1: f64, abs_z: f64, dim: usize) -> f64 {
    let n = dim as f64;
    2.0 * abs_z * (n * k1 - 1.0) / (n * n - 1.0)
}

/// Matrix elements entering the deformed fixed-overlap formulas:
/// `x = ⟨χ|AΛ²A†|χ⟩` and `y = |⟨χ|AΛ²|χ⟩|² / ⟨χ|Λ²|χ⟩`.
pub fn deformed_overlap_parts(
    chi: &PureState,
    a: &dyn LinearOperator,
    lambda: &Deformation,
) -> Result<(f64, f64)> {
    if chi.dim() != a.dim() || chi.dim() != lambda.dim() {
        return Err(Error::DimensionMismatch {
            left: chi.dim(),
            right: a.dim(),
        });
    }
    let adj = a.apply_adjoint(chi.amplitudes());
    let x = lambda.apply(&adj).iter().map(|v| v.norm_sqr()).sum::<f64>();
    let lambda_sq_chi = lambda.apply_squared(chi.amplitudes());
    let numerator = inner(&adj, &lambda_sq_chi).norm_sqr();
    let denominator = inner(chi.amplitudes(), &lambda_sq_chi).re;
    Ok((x, numerator / denominator))
}

/// Deformed fixed-overlap average
/// `(1−|z|²)/(N−1)·⟨χ|AΛ²A†|χ⟩ + (N|z|²−1)/(N−1)·|⟨χ|AΛ²|χ⟩|²/⟨χ|Λ²|χ⟩`.
/// Reduces to [`ha_fixed_overlap`] at Λ = 1.
pub fn ha_fixed_overlap_deformed(
    chi: &PureState,
    a: &dyn LinearOperator,
    lambda: &Deformation,
    z: Complex64,
) -> Result<f64> {
    let (x, y) = deformed_overlap_parts(chi, a, lambda)?;
    Ok(fixed_overlap_mean_parts(x, y, z.norm(), chi.dim()))
}

/// Deformed fixed-overlap variance with the same λ-coefficients as the
/// uniform case. Reduces to [`hv_fixed_overlap`] at Λ = 1.
pub fn hv_fixed_overlap_deformed(
    chi: &PureState,
    a: &dyn LinearOperator,
    lambda: &Deformation,
    z: Complex64,
) -> Result<f64> {
    let (x, y) = deformed_overlap_parts(chi, a, lambda)?;
    Ok(fixed_overlap_variance_parts(x, y, z.norm(), chi.dim()))
}

/// HA[⟨χ|B₁|χ⟩ ⋯ ⟨χ|B_M|χ⟩] over Haar-uniform `|χ⟩`.
///
/// Evaluated as the cycle-type sum
/// `(N−1)!/(N+M−1)! · Σ_{σ∈S_M} Π_{cycles c of σ} Tr(Π_{m∈c} B_m)`,
/// which is the trace-pattern form of the permanent of the index-δ matrix.
/// The prefactor is computed as a short product of reciprocals, never
/// through full factorials. Symmetric under reordering; at most
/// [`MOMENT_PRODUCT_CAP`] factors.
pub fn moment_product(factors: &[&CMatrix]) -> Result<Complex64> {
    let order = factors.len();
    if order == 0 || order > MOMENT_PRODUCT_CAP {
        return Err(Error::UnsupportedOrder {
            order,
            max: MOMENT_PRODUCT_CAP,
        });
    }
    let dim = factors[0].dim();
    if factors.iter().any(|f| f.dim() != dim) {
        return Err(Error::DimensionMismatch {
            left: dim,
            right: factors.iter().map(|f| f.dim()).find(|&d| d != dim).unwrap(),
        });
    }

    let mut cycle_traces: HashMap<Vec<usize>, Complex64> = HashMap::new();
    let mut trace_of_cycle = |cycle: &[usize]| -> Complex64 {
        // Canonical key: rotate the cycle so its smallest label leads.
        let min_pos = cycle
            .iter()
            .enumerate()
            .min_by_key(|&(_, v)| v)
            .map(|(i, _)| i)
            .unwrap();
        let mut key = Vec::with_capacity(cycle.len());
        key.extend_from_slice(&cycle[min_pos..]);
        key.extend_from_slice(&cycle[..min_pos]);
        if let Some(&t) = cycle_traces.get(&key) {
            return t;
        }
        let mut product = factors[key[0]].clone();
        for &idx in &key[1..] {
            product = product.mul(factors[idx]);
        }
        let t = product.trace();
        cycle_traces.insert(key, t);
        t
    };

    let mut total = Complex64::ZERO;
    for perm in permutations(order) {
        let mut seen = vec![false; order];
        let mut term = Complex64::ONE;
        for start in 0..order {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut at = start;
            while !seen[at] {
                seen[at] = true;
                cycle.push(at);
                at = perm[at];
            }
            term *= trace_of_cycle(&cycle);
        }
        total += term;
    }

    let mut prefactor = 1.0;
    for j in 0..order {
        prefactor /= (dim + j) as f64;
    }
    Ok(total * prefactor)
}

/// All permutations of 0..len (len ≤ 6, so at most 720 entries).
fn permutations(len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..len).collect();
    heap_permute(&mut items, len, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// Result of the geometric-series approximation for the both-states
/// deformed average, together with its validity diagnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformedPairAverage {
    pub value: f64,
    /// N·Tr ρρ′, the mean of the expanded denominator; the expansion is
    /// trustworthy when this sits near 1.
    pub expansion_parameter: f64,
    pub within_gate: bool,
}

/// The z-independent ingredients of the geometric-series approximation:
/// the trace of the first term and the expanded-fraction average. Building
/// this once covers a whole θ grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformedPairContext {
    dim: usize,
    first_term: f64,
    fraction_average: f64,
    expansion_parameter: f64,
}

impl DeformedPairContext {
    /// Assembles the moment products for the pair (A, Λ, Λ′): the fraction
    /// `1/⟨χ|Λ′Λ²Λ′|χ⟩` is expanded to second order around 1 and each term
    /// reduced by [`moment_product`] with α = Λ′AΛ²Λ′, β = Λ′Λ²Λ′.
    pub fn new(a: &CMatrix, lambda: &Deformation, lambda_prime: &Deformation) -> Result<Self> {
        let dim = a.dim();
        if lambda.dim() != dim || lambda_prime.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: lambda.dim(),
                right: dim,
            });
        }
        let n = dim as f64;
        let lam_sq = lambda.squared_diagonal();
        let lam_prime = lambda_prime.scale();

        // First term: Tr(Λ′AΛ²A†Λ′)/N = (1/N) Σ_ij λ′_i² |A_ij|² λ_j².
        let mut first_term = 0.0;
        for (i, weight) in lam_prime.iter().enumerate() {
            let row_weight = weight * weight;
            for (j, &col_weight) in lam_sq.iter().enumerate() {
                first_term += row_weight * a.get(i, j).norm_sqr() * col_weight;
            }
        }
        first_term /= n;

        let scaled_cols: Vec<f64> = lam_sq.iter().zip(lam_prime).map(|(&s, &p)| s * p).collect();
        let alpha = a.scale_rows(lam_prime).scale_cols(&scaled_cols);
        let alpha_dag = alpha.adjoint();
        let beta_diag: Vec<f64> = lam_sq
            .iter()
            .zip(lam_prime)
            .map(|(&s, &p)| s * p * p)
            .collect();
        let beta = CMatrix::from_diagonal(&beta_diag);

        let m2 = moment_product(&[&alpha, &alpha_dag])?.re;
        let m3 = moment_product(&[&beta, &alpha, &alpha_dag])?.re;
        let m4 = moment_product(&[&beta, &beta, &alpha, &alpha_dag])?.re;

        Ok(DeformedPairContext {
            dim,
            first_term,
            fraction_average: 3.0 * m2 - 3.0 * m3 + m4,
            expansion_parameter: beta_diag.iter().sum::<f64>() / n,
        })
    }

    /// The approximated average at a given overlap.
    pub fn evaluate(&self, z: Complex64) -> DeformedPairAverage {
        let n = self.dim as f64;
        let w = z.norm_sqr();
        DeformedPairAverage {
            value: (1.0 - w) / (n - 1.0) * self.first_term
                + (n * w - 1.0) / (n - 1.0) * self.fraction_average,
            expansion_parameter: self.expansion_parameter,
            within_gate: (EXPANSION_GATE.0..=EXPANSION_GATE.1).contains(&self.expansion_parameter),
        }
    }
}

/// Both-states deformed average via the second-order geometric-series
/// expansion of `1/⟨χ|Λ′Λ²Λ′|χ⟩`. Exact (not just approximate) at
/// Λ = Λ′ = 1, where it coincides with [`ha_fixed_overlap_both`].
pub fn approx_ha_full_nonuniform(
    a: &CMatrix,
    lambda: &Deformation,
    lambda_prime: &Deformation,
    z: Complex64,
) -> Result<DeformedPairAverage> {
    Ok(DeformedPairContext::new(a, lambda, lambda_prime)?.evaluate(z))
}

/// Density `p(s) = (N−1)(1−s)^{N−2}` of the transition probability between
/// independent uniform states under a unitary (Kumaraswamy law; the
/// broken-time-reversal replacement for Porter–Thomas).
pub fn kumaraswamy_pdf(s: f64, dim: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("s = {s} outside [0, 1]")));
    }
    let n = dim as f64;
    Ok((n - 1.0) * (1.0 - s).powi(dim as i32 - 2))
}

/// CDF `1 − (1−s)^{N−1}` of the Kumaraswamy law.
pub fn kumaraswamy_cdf(s: f64, dim: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("s = {s} outside [0, 1]")));
    }
    Ok(1.0 - (1.0 - s).powi(dim as i32 - 1))
}

/// Exact finite-N moments of the Kumaraswamy law from its Beta-integral raw
/// moments `⟨s^k⟩ = k!(N−1)!/(N+k−1)!`. Mean and standard deviation are both
/// 1/N up to O(1/N²); skewness → 2 and kurtosis → 9 as N → ∞.
pub fn kumaraswamy_moments(dim: usize) -> MomentReport {
    let n = dim as f64;
    let r1 = 1.0 / n;
    let r2 = 2.0 / (n * (n + 1.0));
    let r3 = 6.0 / (n * (n + 1.0) * (n + 2.0));
    let r4 = 24.0 / (n * (n + 1.0) * (n + 2.0) * (n + 3.0));
    let variance = r2 - r1 * r1;
    let central3 = r3 - 3.0 * r1 * r2 + 2.0 * r1.powi(3);
    let central4 = r4 - 4.0 * r1 * r3 + 6.0 * r1 * r1 * r2 - 3.0 * r1.powi(4);
    MomentReport {
        mean: r1,
        variance,
        skewness: central3 / variance.powf(1.5),
        kurtosis: central4 / (variance * variance),
    }
}
