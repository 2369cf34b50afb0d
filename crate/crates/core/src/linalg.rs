//! Small dense complex matrices and the operator abstraction.
//!
//! Matrix sizes here are desk scale (N ≤ 4096), so a plain row-major buffer
//! with straightforward kernels is all that is needed.

use num_complex::Complex64;
use rand::Rng;

use crate::rng::complex_gaussian;
use crate::{Error, Result};

/// Anything that can act on a state vector, together with its adjoint.
///
/// The structured kicked-Ising propagator, dense matrices and diagonal
/// deformations all implement this, so estimators and closed forms can mix
/// them freely.
pub trait LinearOperator: Send + Sync {
    fn dim(&self) -> usize;
    fn apply(&self, v: &[Complex64]) -> Vec<Complex64>;
    fn apply_adjoint(&self, v: &[Complex64]) -> Vec<Complex64>;

    /// Dense realization, column by column. Intended for moment formulas
    /// that need explicit matrix products.
    fn to_matrix(&self) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n);
        let mut basis = vec![Complex64::ZERO; n];
        for j in 0..n {
            basis[j] = Complex64::ONE;
            let col = self.apply(&basis);
            basis[j] = Complex64::ZERO;
            for (i, &value) in col.iter().enumerate() {
                m.set(i, j, value);
            }
        }
        m
    }
}

/// The identity on an N-dimensional space.
#[derive(Debug, Clone, Copy)]
pub struct IdentityOp(pub usize);

impl LinearOperator for IdentityOp {
    fn dim(&self) -> usize {
        self.0
    }
    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        v.to_vec()
    }
    fn apply_adjoint(&self, v: &[Complex64]) -> Vec<Complex64> {
        v.to_vec()
    }
}

/// Dense square complex matrix, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Diagonal matrix from real entries.
    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(d, 0.0));
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Replace rows by `diag[i] * row_i` (left multiply by a real diagonal).
    pub fn scale_rows(&self, diag: &[f64]) -> Self {
        assert_eq!(diag.len(), self.dim);
        Self::from_fn(self.dim, |i, j| diag[i] * self.get(i, j))
    }

    /// Replace columns by `col_j * diag[j]` (right multiply by a real diagonal).
    pub fn scale_cols(&self, diag: &[f64]) -> Self {
        assert_eq!(diag.len(), self.dim);
        Self::from_fn(self.dim, |i, j| self.get(i, j) * diag[j])
    }
}

impl LinearOperator for CMatrix {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "matrix-vector dimension mismatch");
        let mut out = vec![Complex64::ZERO; self.dim];
        for (i, slot) in out.iter_mut().enumerate() {
            let row = &self.data[i * self.dim..(i + 1) * self.dim];
            let mut acc = Complex64::ZERO;
            for (a, x) in row.iter().zip(v) {
                acc += a * x;
            }
            *slot = acc;
        }
        out
    }

    fn apply_adjoint(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "matrix-vector dimension mismatch");
        let mut out = vec![Complex64::ZERO; self.dim];
        for (k, &x) in v.iter().enumerate() {
            if x == Complex64::ZERO {
                continue;
            }
            let row = &self.data[k * self.dim..(k + 1) * self.dim];
            for (o, a) in out.iter_mut().zip(row) {
                *o += a.conj() * x;
            }
        }
        out
    }

    fn to_matrix(&self) -> CMatrix {
        self.clone()
    }
}

/// ⟨a|b⟩ with the physics convention: conjugate-linear in the first slot.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Tr AA† computed through operator application (N adjoint applies).
pub fn trace_a_adjoint(op: &dyn LinearOperator) -> f64 {
    let n = op.dim();
    let mut basis = vec![Complex64::ZERO; n];
    let mut total = 0.0;
    for j in 0..n {
        basis[j] = Complex64::ONE;
        let col = op.apply_adjoint(&basis);
        basis[j] = Complex64::ZERO;
        total += col.iter().map(|x| x.norm_sqr()).sum::<f64>();
    }
    total
}

/// Tr (AA†)² = ‖AA†‖²_F computed through operator application.
pub fn trace_a_adjoint_squared(op: &dyn LinearOperator) -> f64 {
    let n = op.dim();
    let mut basis = vec![Complex64::ZERO; n];
    let mut total = 0.0;
    for j in 0..n {
        basis[j] = Complex64::ONE;
        let col = op.apply(&op.apply_adjoint(&basis));
        basis[j] = Complex64::ZERO;
        total += col.iter().map(|x| x.norm_sqr()).sum::<f64>();
    }
    total
}

/// Haar-random unitary: Gaussian matrix followed by modified Gram-Schmidt.
/// The R diagonal is positive by construction, which is exactly the QR
/// convention that makes Q Haar distributed.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<CMatrix> {
    if dim < 2 {
        return Err(Error::InvalidDimension { dim });
    }
    // Columns of the Gaussian matrix, orthonormalized in order.
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| (0..dim).map(|_| complex_gaussian(rng)).collect())
        .collect();
    for j in 0..dim {
        for k in 0..j {
            let proj = inner(&cols[k], &cols[j]);
            let prev = cols[k].clone();
            for (x, p) in cols[j].iter_mut().zip(&prev) {
                *x -= proj * p;
            }
        }
        let nrm = norm(&cols[j]);
        if nrm < 1e-12 {
            return Err(Error::Numeric(
                "rank-deficient Gaussian draw in unitary sampling".into(),
            ));
        }
        for x in cols[j].iter_mut() {
            *x /= nrm;
        }
    }
    Ok(CMatrix::from_fn(dim, |i, j| cols[j][i]))
}
