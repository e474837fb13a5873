//! Independent evaluation of `Z_{f,φ}(s) = ∫ |f|^s φ` for bump test functions.
//!
//! * [`zeta_direct`] integrates over the support square for `s > 0`.
//! * [`zeta_continued`] uses the continuation
//!   `Z(s) = (-1)^{N} a / Π_{k=a+b}^{m}(ms + k) · (Φ₊(s) + Φ₋(s))`, `N = m - a - b + 1`,
//!   valid for `s > -1`.
//! * [`residue_closed_form`] and [`residue_numeric_fit`] compute the residue at a
//!   candidate pole in two unrelated ways.

pub mod bump;
mod continued;
mod direct;
mod residue;

use thiserror::Error;

pub use bump::{bump_phi, bump_psi, BumpSpec, BumpSpec2D};
pub use continued::{phi_plus_minus, zeta_continued};
pub use direct::zeta_direct;
pub use residue::{residue_closed_form, residue_fit_samples, residue_numeric_fit, FitSamples, FIT_EPSILONS, FIT_TOL};

use crate::quadrature::QuadratureError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZetaError {
    #[error("s = {s} is a pole of the continuation factor (ms + {k} = 0)")]
    EvaluationAtPole { s: f64, k: u64 },
    #[error("s = {s} outside the domain of this method ({domain})")]
    OutOfDomain { s: f64, domain: &'static str },
    #[error("d = {d} is not a window numerator for {weights}")]
    NotInWindow { d: u64, weights: String },
    #[error("residue fit unstable: extrapolants {first} and {second} differ by more than {limit}")]
    FitUnstable { first: f64, second: f64, limit: f64 },
    #[error("zeta quadrature failed: {0}")]
    Quadrature(#[from] QuadratureError),
}
