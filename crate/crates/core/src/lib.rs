//! Hilbert-space averages and variances of quantum transition probabilities.
//!
//! This crate implements the closed-form expressions for Hilbert-space
//! averages (HA) and variances (HV) of expectation values and transition
//! probabilities `|⟨χ|A|ψ⟩|²` over ensembles of pure states: uniform (Haar),
//! fixed-overlap (`⟨χ|ψ⟩ = z` enforced constructively), and nonuniformly
//! deformed ensembles `|ψ⟩ → Λ|ψ⟩` with `Λ = √(Nρ)` built from a statistical
//! operator with a preset expectation value. The kicked Ising chain Floquet
//! operator serves as the test operator, and every closed form is backed by
//! a seeded, deterministically parallel Monte Carlo estimator.
//!
//! Module map:
//! - [`statespace`]: pure-state sampling and fixed-overlap constructions.
//! - [`kicked_ising`]: the Floquet operator, magnetization, spectral form factor.
//! - [`ensembles`]: statistical operators `ρ(m, M)`, purity, deformation `Λ`.
//! - [`closedform`]: every analytic HA/HV formula, evaluated from traces and
//!   matrix elements.
//! - [`montecarlo`]: empirical estimators and transition-probability histograms.
//! - [`scan`]: θ-grid experiments pairing analytic curves with Monte Carlo.

pub mod closedform;
pub mod ensembles;
mod error;
mod jsonnum;
pub mod kicked_ising;
pub mod linalg;
pub mod montecarlo;
pub mod rng;
pub mod scan;
pub mod statespace;

pub use error::{Error, Result};
pub use linalg::{CMatrix, LinearOperator};
pub use statespace::PureState;

/// Complex double-precision scalar used throughout.
pub type C64 = num_complex::Complex64;
