//! The criterion integral
//!
//! ```text
//! I(j, k) = ∫_ℝ (|f(1,u)|^{s₀} + (-1)^j |f(-1,u)|^{s₀}) u^k du
//! ```
//!
//! The integrand has algebraic singularities `|u - r|^{s₀}` at the simple real roots
//! of `f(±1, u)` and decays like `|u|^{k + D s₀}` at infinity. Both are absorbed
//! into Gauss–Jacobi weights with the exact exponents; see [`engine`].

pub mod engine;
pub mod rules;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use engine::{integrate_endpoint, integrate_interval, integrate_line, LineWeight, MonomialWeight};
pub use rules::{gauss_jacobi_rule, gauss_kronrod21, gauss_legendre_rule, Rule};

use crate::poly::{Poly, PolyError, Sign, Weights};
use crate::{to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("quadrature failed: {reason}")]
    Failure { reason: String, value: f64, error: f64 },
    #[error("integral diverges at infinity (tail exponent {exponent} ≤ -1)")]
    DivergentTail { exponent: f64 },
    #[error("structural invariant violated: {0}")]
    StructuralInvariantViolated(String),
    #[error("restriction f(±1,u) vanishes identically")]
    ZeroPolynomial,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Target error relative to the L¹ mass of the integrand.
    pub rel_err: f64,
    pub zero_abs: f64,
    pub zero_rel: f64,
    /// Root isolation width before anchoring a singular chart.
    #[serde(with = "crate::rational_serde")]
    pub root_width: Rational,
    /// Points of the finer Gauss–Jacobi rule; the coarse one has half as many.
    pub gj_nodes: usize,
    /// Refinement budget in pieces per integral.
    pub max_pieces: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rel_err: 1e-10,
            zero_abs: 1e-9,
            zero_rel: 1e-7,
            root_width: Rational::new(BigInt::one(), BigInt::from(10).pow(30)),
            gj_nodes: 20,
            max_pieces: 2000,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<(), String> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(format!("{name} must be positive and finite, got {v}"))
            }
        };
        positive("rel_err", self.rel_err)?;
        positive("zero_abs", self.zero_abs)?;
        positive("zero_rel", self.zero_rel)?;
        if self.root_width <= Rational::zero() {
            return Err("root_width must be positive".into());
        }
        if self.gj_nodes < 2 || self.max_pieces < 1 {
            return Err("need gj_nodes ≥ 2 and max_pieces ≥ 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    GaussJacobi,
    Adaptive,
    TailTransform,
}

/// One chart of the integration plan; `None` endpoints are infinite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub method: Method,
    pub nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    /// `∫(|g₊|^s + |g₋|^s)|u|^k`, an upper bound for the mass of the combined integrand.
    pub l1_mass: f64,
    pub segments: Vec<Segment>,
    pub evaluations: usize,
}

/// `max(deg f(1,u), deg f(-1,u))`.
pub fn restriction_degree(f: &Poly) -> usize {
    Sign::both()
        .iter()
        .filter_map(|&s| f.restrict(s).degree())
        .max()
        .unwrap_or(0)
}

/// Checks that the criterion integral for `(s₀, k)` converges at infinity and that
/// `m - b·D ∈ {0, a}`.
pub fn convergence_precheck(f: &Poly, w: &Weights, s0: &Rational, k: u32) -> Result<(), QuadratureError> {
    let d = restriction_degree(f);
    let bd = w.b * d as u64;
    if !(bd == w.m || bd + w.a == w.m) {
        return Err(QuadratureError::StructuralInvariantViolated(format!(
            "m - b·D = {} - {}·{d} not in {{0, {}}}",
            w.m, w.b, w.a
        )));
    }
    for sign in Sign::both() {
        if !f.restrict(sign).is_squarefree() {
            return Err(QuadratureError::StructuralInvariantViolated(format!(
                "f({}, u) has a repeated root",
                sign.as_f64()
            )));
        }
    }
    let tail = Rational::from_integer(k.into()) + Rational::from_integer(d.into()) * s0;
    if tail >= -Rational::one() {
        return Err(QuadratureError::DivergentTail {
            exponent: -to_f64(&tail) - 2.0,
        });
    }
    Ok(())
}

/// `∫_ℝ (|f(1,u)|^{s₀} + (-1)^j |f(-1,u)|^{s₀}) u^k du`.
pub fn singular_integral(f: &Poly, s0: &Rational, j: u32, k: u32, tol: &Tolerances) -> Result<IntegralResult, QuadratureError> {
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    let terms = [(1.0, f.restrict(Sign::Plus)), (sign, f.restrict(Sign::Minus))];
    integrate_line(&terms, to_f64(s0), &MonomialWeight(k), tol)
}
