//! Kicked Ising chain: Floquet operator, magnetization, spectral statistics.
//!
//! A closed ring of n spins-1/2 with Ising coupling J and longitudinal field
//! h, kicked once per period by a transverse field b. The one-period
//! propagator factorizes as U = U_I U_K where U_I is diagonal in the σ^z
//! basis and U_K rotates every spin around the x-axis. The operator is kept
//! in this structured form; applying it costs O(n·2^n) instead of O(4^n).
//!
//! Basis convention: basis index s ∈ [0, 2^n), bit i (little-endian) holds
//! spin i, and z_i = +1 for bit value 0. Any fixed convention gives the same
//! traces, form factors and Hilbert-space averages; this one makes the kick
//! on spin i a stride-2^i pair rotation.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::linalg::LinearOperator;
use crate::{Error, Result};

/// Default cap on the chain length: 2^12 amplitudes dense is 256 MiB.
pub const DEFAULT_SPIN_CAP: usize = 12;

/// Chain parameters. Couplings are angles per period (ħ = 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KicParams {
    /// Number of spins on the ring.
    pub n: usize,
    /// Ising coupling strength J.
    pub coupling: f64,
    /// Longitudinal (on-site) field h.
    pub field: f64,
    /// Transverse kick field b.
    pub kick: f64,
}

impl KicParams {
    pub fn new(n: usize, coupling: f64, field: f64, kick: f64) -> Result<Self> {
        Self::with_cap(n, coupling, field, kick, DEFAULT_SPIN_CAP)
    }

    pub fn with_cap(n: usize, coupling: f64, field: f64, kick: f64, cap: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidArgument("need at least one spin".into()));
        }
        if n > cap {
            return Err(Error::ResourceLimit { n, cap });
        }
        Ok(Self {
            n,
            coupling,
            field,
            kick,
        })
    }

    /// Hilbert space dimension N = 2^n.
    pub fn dim(&self) -> usize {
        1 << self.n
    }
}

/// One-period propagator U = U_I U_K in structured form: the diagonal phases
/// of U_I plus the single-site kick angle. A dense realization is
/// materialized lazily on first request.
pub struct FloquetOperator {
    params: KicParams,
    diag_phases: Vec<Complex64>,
    cos_kick: f64,
    sin_kick: f64,
    dense: OnceLock<crate::CMatrix>,
}

/// Builds the Floquet operator for the given chain parameters.
///
/// The diagonal of U_I is `exp(-i Σ_i (J z_i z_{i+1} + h z_i))` with periodic
/// boundary `z_{n+1} = z_1`; U_K applies `exp(-i b σ^x)` on every site.
pub fn build_floquet(params: KicParams) -> FloquetOperator {
    let n = params.n;
    let dim = params.dim();
    let mut diag_phases = Vec::with_capacity(dim);
    for s in 0..dim {
        let mut energy = 0.0;
        for i in 0..n {
            let z_i = 1.0 - 2.0 * ((s >> i) & 1) as f64;
            let z_next = 1.0 - 2.0 * ((s >> ((i + 1) % n)) & 1) as f64;
            energy += params.coupling * z_i * z_next + params.field * z_i;
        }
        diag_phases.push(Complex64::from_polar(1.0, -energy));
    }
    FloquetOperator {
        params,
        diag_phases,
        cos_kick: params.kick.cos(),
        sin_kick: params.kick.sin(),
        dense: OnceLock::new(),
    }
}

impl FloquetOperator {
    pub fn params(&self) -> &KicParams {
        &self.params
    }

    pub fn diag_phases(&self) -> &[Complex64] {
        &self.diag_phases
    }

    /// Kick pass: n successive stride-2^i pair rotations by exp(-i b σ^x).
    /// `sin_sign = -1.0` applies the adjoint kick.
    fn kick_in_place(&self, v: &mut [Complex64], sin_sign: f64) {
        let n = self.params.n;
        let dim = v.len();
        let c = self.cos_kick;
        let off_diag = Complex64::new(0.0, -sin_sign * self.sin_kick);
        for site in 0..n {
            let step = 1 << site;
            let mut block = 0;
            while block < dim {
                for offset in block..block + step {
                    let a0 = v[offset];
                    let a1 = v[offset + step];
                    v[offset] = c * a0 + off_diag * a1;
                    v[offset + step] = off_diag * a0 + c * a1;
                }
                block += 2 * step;
            }
        }
    }

    /// Dense N×N matrix, built column by column from the structured
    /// application and cached.
    pub fn dense(&self) -> &crate::CMatrix {
        self.dense.get_or_init(|| LinearOperator::to_matrix(self))
    }
}

impl LinearOperator for FloquetOperator {
    fn dim(&self) -> usize {
        self.params.dim()
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim(), "state dimension mismatch");
        let mut out = v.to_vec();
        self.kick_in_place(&mut out, 1.0);
        for (x, phase) in out.iter_mut().zip(&self.diag_phases) {
            *x *= phase;
        }
        out
    }

    fn apply_adjoint(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim(), "state dimension mismatch");
        // U† = U_K† U_I†: conjugate phases first, then the inverse kick.
        let mut out: Vec<Complex64> = v
            .iter()
            .zip(&self.diag_phases)
            .map(|(x, phase)| x * phase.conj())
            .collect();
        self.kick_in_place(&mut out, -1.0);
        out
    }
}

/// Tr U^T via T structured applications per basis column.
pub fn trace_power(u: &FloquetOperator, power: usize) -> Complex64 {
    assert!(power >= 1, "trace power needs T >= 1");
    let dim = u.dim();
    let mut total = Complex64::ZERO;
    let mut column = vec![Complex64::ZERO; dim];
    for s in 0..dim {
        column.fill(Complex64::ZERO);
        column[s] = Complex64::ONE;
        let mut state = column.clone();
        for _ in 0..power {
            state = u.apply(&state);
        }
        total += state[s];
    }
    total
}

/// Spectral form factor K(T) = |Tr U^T|²/N; K(0) = N.
pub fn form_factor(u: &FloquetOperator, power: usize) -> f64 {
    let dim = u.dim() as f64;
    if power == 0 {
        return dim;
    }
    trace_power(u, power).norm_sqr() / dim
}

/// Magnetization in z-direction, M_z = Σ_i σ_i^z, diagonal in the
/// computational basis with binomial eigenvalue multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnetizationObservable {
    n: usize,
    eigenvalues: Vec<i32>,
}

/// Builds M_z for an n-spin ring.
pub fn build_magnetization(n: usize) -> Result<MagnetizationObservable> {
    if n < 1 {
        return Err(Error::InvalidArgument("need at least one spin".into()));
    }
    let dim = 1usize << n;
    let eigenvalues = (0..dim)
        .map(|s: usize| n as i32 - 2 * (s.count_ones() as i32))
        .collect();
    Ok(MagnetizationObservable { n, eigenvalues })
}

impl MagnetizationObservable {
    pub fn spins(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[i32] {
        &self.eigenvalues
    }

    /// Diagonal as floats, for the statistical-operator builder.
    pub fn diagonal(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|&e| e as f64).collect()
    }

    /// Distinct eigenvalues with multiplicities: (n − 2k, C(n, k)).
    pub fn value_multiplicities(&self) -> Vec<(f64, u64)> {
        let n = self.n;
        let mut out = Vec::with_capacity(n + 1);
        let mut binom: u64 = 1;
        for k in 0..=n {
            out.push(((n as i64 - 2 * k as i64) as f64, binom));
            if k < n {
                binom = binom * (n - k) as u64 / (k + 1) as u64;
            }
        }
        out
    }
}

impl LinearOperator for MagnetizationObservable {
    fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim(), "state dimension mismatch");
        v.iter()
            .zip(&self.eigenvalues)
            .map(|(x, &e)| x * e as f64)
            .collect()
    }

    fn apply_adjoint(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.apply(v)
    }
}

/// Parses an angle literal: a decimal number, or a multiple of π written as
/// `pi`, `pi/4`, `2pi/5`, `-pi/3`, `0.5pi`, ...
pub fn parse_angle(text: &str) -> Result<f64> {
    let trimmed = text.trim();
    if let Ok(value) = trimmed.parse::<f64>() {
        return Ok(value);
    }
    let lower = trimmed.to_ascii_lowercase();
    let (sign, body) = match lower.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, lower.as_str()),
    };
    let Some(pi_at) = body.find("pi") else {
        return Err(Error::InvalidArgument(format!(
            "cannot parse angle literal '{text}'"
        )));
    };
    let coef_text = &body[..pi_at];
    let coef = if coef_text.is_empty() {
        1.0
    } else {
        coef_text.parse::<f64>().map_err(|_| {
            Error::InvalidArgument(format!("bad coefficient in angle literal '{text}'"))
        })?
    };
    let rest = &body[pi_at + 2..];
    let denom = if rest.is_empty() {
        1.0
    } else if let Some(denom_text) = rest.strip_prefix('/') {
        let d = denom_text.parse::<f64>().map_err(|_| {
            Error::InvalidArgument(format!("bad denominator in angle literal '{text}'"))
        })?;
        if d == 0.0 {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        d
    } else {
        return Err(Error::InvalidArgument(format!(
            "cannot parse angle literal '{text}'"
        )));
    };
    Ok(sign * coef * std::f64::consts::PI / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::norm;
    use crate::rng::{complex_gaussian, substream};
    use crate::CMatrix;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn chaotic(n: usize) -> FloquetOperator {
        build_floquet(KicParams::new(n, FRAC_PI_4, PI / 5.0, FRAC_PI_4).unwrap())
    }

    fn noninteracting(n: usize) -> FloquetOperator {
        build_floquet(KicParams::new(n, 0.0, 0.0, FRAC_PI_4).unwrap())
    }

    fn random_state(dim: usize, seed: u64) -> Vec<Complex64> {
        let mut rng = substream(seed, 0);
        (0..dim).map(|_| complex_gaussian(&mut rng)).collect()
    }

    /// Independent dense route: kron of per-site kick matrices times the
    /// interaction phases.
    fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
        let (da, db) = (a.dim(), b.dim());
        CMatrix::from_fn(da * db, |i, j| {
            a.get(i / db, j / db) * b.get(i % db, j % db)
        })
    }

    fn dense_oracle(params: &KicParams) -> CMatrix {
        let b = params.kick;
        let site = CMatrix::from_fn(2, |i, j| {
            if i == j {
                Complex64::new(b.cos(), 0.0)
            } else {
                Complex64::new(0.0, -b.sin())
            }
        });
        // Site 0 is the least significant bit, hence the last kron factor.
        let mut kick = site.clone();
        for _ in 1..params.n {
            kick = kron(&site, &kick);
        }
        let mut full = CMatrix::zeros(params.dim());
        for s in 0..params.dim() {
            let mut energy = 0.0;
            for i in 0..params.n {
                let z_i = 1.0 - 2.0 * ((s >> i) & 1) as f64;
                let z_next = 1.0 - 2.0 * ((s >> ((i + 1) % params.n)) & 1) as f64;
                energy += params.coupling * z_i * z_next + params.field * z_i;
            }
            let phase = Complex64::from_polar(1.0, -energy);
            for j in 0..params.dim() {
                full.set(s, j, phase * kick.get(s, j));
            }
        }
        full
    }

    #[test]
    fn single_spin_xrotation() {
        let u = build_floquet(KicParams::new(1, 0.0, 0.0, FRAC_PI_4).unwrap());
        let m = u.dense();
        let c = FRAC_PI_4.cos();
        let s = FRAC_PI_4.sin();
        assert!((m.get(0, 0) - Complex64::new(c, 0.0)).norm() < 1e-14);
        assert!((m.get(0, 1) - Complex64::new(0.0, -s)).norm() < 1e-14);
        assert!((m.get(1, 0) - Complex64::new(0.0, -s)).norm() < 1e-14);
        assert!((m.get(1, 1) - Complex64::new(c, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn pure_kick_is_tensor_power() {
        // J = h = 0: the dense operator must equal the explicit kron power.
        let params = KicParams::new(4, 0.0, 0.0, FRAC_PI_4).unwrap();
        let u = build_floquet(params);
        let oracle = dense_oracle(&params);
        let dense = u.dense();
        for i in 0..params.dim() {
            for j in 0..params.dim() {
                assert!((dense.get(i, j) - oracle.get(i, j)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_kick_gives_diagonal_unitary() {
        let params = KicParams::new(5, 0.3, 0.7, 0.0).unwrap();
        let u = build_floquet(params);
        let v = random_state(params.dim(), 21);
        let image = u.apply(&v);
        for ((x, y), phase) in v.iter().zip(&image).zip(u.diag_phases()) {
            assert!((y - x * phase).norm() < 1e-14);
            assert!((phase.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn identity_at_trivial_parameters() {
        let u = build_floquet(KicParams::new(2, 0.0, 0.0, 0.0).unwrap());
        let v = random_state(4, 22);
        let image = u.apply(&v);
        for (x, y) in v.iter().zip(&image) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn unitarity_on_random_vectors() {
        let u = chaotic(8);
        for trial in 0..100 {
            let mut v = random_state(u.dim(), 1000 + trial);
            let scale = norm(&v);
            for x in v.iter_mut() {
                *x /= scale;
            }
            let image = u.apply(&v);
            assert!((norm(&image) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn structured_matches_dense_kron_oracle() {
        let params = KicParams::new(6, FRAC_PI_4, PI / 5.0, FRAC_PI_4).unwrap();
        let u = build_floquet(params);
        let oracle = dense_oracle(&params);
        let v = random_state(params.dim(), 23);
        let structured = u.apply(&v);
        let dense = oracle.apply(&v);
        for (a, b) in structured.iter().zip(&dense) {
            assert!((a - b).norm() < 1e-12, "{a} vs {b}");
        }
        let structured_adj = u.apply_adjoint(&v);
        let dense_adj = oracle.apply_adjoint(&v);
        for (a, b) in structured_adj.iter().zip(&dense_adj) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn commutes_with_cyclic_shift() {
        let u = chaotic(6);
        let n = 6;
        let dim = u.dim();
        let shift = |v: &[Complex64]| -> Vec<Complex64> {
            let mut out = vec![Complex64::ZERO; dim];
            for (s, &amp) in v.iter().enumerate() {
                let target = ((s << 1) | (s >> (n - 1))) & (dim - 1);
                out[target] = amp;
            }
            out
        };
        let v = random_state(dim, 24);
        let left = u.apply(&shift(&v));
        let right = shift(&u.apply(&v));
        for (a, b) in left.iter().zip(&right) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn trace_of_pure_kick_factorizes() {
        // Per-site trace 2 cos(π/4) = √2, so Tr U = √2³ for three spins.
        let u = noninteracting(3);
        let tr = trace_power(&u, 1);
        let expected = 2f64.sqrt().powi(3);
        assert!((tr - Complex64::new(expected, 0.0)).norm() < 1e-10, "{tr}");
    }

    #[test]
    fn trace_power_matches_dense_trace() {
        let u = chaotic(5);
        let tr = trace_power(&u, 1);
        let dense_tr = u.dense().trace();
        assert!((tr - dense_tr).norm() < 1e-10);
    }

    #[test]
    fn diagonal_trace_square_is_exact() {
        let params = KicParams::new(4, 0.9, 0.4, 0.0).unwrap();
        let u = build_floquet(params);
        let expected: Complex64 = u.diag_phases().iter().map(|p| p * p).sum();
        assert_eq!(trace_power(&u, 2), expected);
    }

    #[test]
    fn form_factor_basics() {
        let u = chaotic(6);
        assert_eq!(form_factor(&u, 0), 64.0);
        assert!(form_factor(&u, 1) >= 0.0);

        // The pure π/2-kick chain has K(1) = 1 exactly.
        let free = noninteracting(8);
        assert!((form_factor(&free, 1) - 1.0).abs() < 1e-10);
        assert!((form_factor(&free, 3) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn magnetization_spectrum() {
        let single = build_magnetization(1).unwrap();
        assert_eq!(single.eigenvalues(), &[1, -1]);

        let pair = build_magnetization(2).unwrap();
        assert_eq!(pair.eigenvalues(), &[2, 0, 0, -2]);

        let m8 = build_magnetization(8).unwrap();
        let zero_multiplicity = m8.eigenvalues().iter().filter(|&&e| e == 0).count();
        assert_eq!(zero_multiplicity, 70);
        let sum: i64 = m8.eigenvalues().iter().map(|&e| e as i64).sum();
        assert_eq!(sum, 0);
        let sum_sq: i64 = m8.eigenvalues().iter().map(|&e| (e as i64).pow(2)).sum();
        assert_eq!(sum_sq, 8 * 256);

        let mults = m8.value_multiplicities();
        assert_eq!(mults[0], (8.0, 1));
        assert_eq!(mults[4], (0.0, 70));
        assert_eq!(mults.iter().map(|&(_, m)| m).sum::<u64>(), 256);
    }

    #[test]
    fn spin_cap_enforced() {
        assert!(matches!(
            KicParams::new(13, 0.0, 0.0, 0.0),
            Err(Error::ResourceLimit { n: 13, cap: 12 })
        ));
        assert!(KicParams::with_cap(13, 0.0, 0.0, 0.0, 14).is_ok());
        assert!(KicParams::new(0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn angle_literals() {
        assert_eq!(parse_angle("pi/4").unwrap(), PI / 4.0);
        assert_eq!(parse_angle("pi/5").unwrap(), PI / 5.0);
        assert_eq!(parse_angle("2pi/5").unwrap(), 2.0 * PI / 5.0);
        assert_eq!(parse_angle("-pi/3").unwrap(), -PI / 3.0);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert_eq!(parse_angle("0.5pi").unwrap(), 0.5 * PI);
        assert!(parse_angle("tau/2").is_err());
        assert!(parse_angle("pi/0").is_err());
    }
}
