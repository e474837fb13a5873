//! Compactly supported test functions with prescribed derivatives at the origin.
//!
//! `ρ(x) = exp(-1/(1-x²))` on `|x| < 1`. Writing `ρ = e^{-1} T` with
//! `T(x) = exp(-x²/(1-x²))`, the combination `ψ = Σ cᵢ xⁱ ρ` has
//! `ψ^{(k)}(0) = δ_{rk}` for `k ≤ d` exactly when `P = e^{-1} Σ cᵢ xⁱ` agrees with
//! `(x^r / r!) · T^{-1}` up to degree `d`. Both series have rational coefficients.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{to_f64, Rational};

/// Below this exponent `T` underflows and the bump is treated as zero.
const UNDERFLOW_EXPONENT: f64 = -600.0;

/// Taylor coefficients of `exp(sign · x²/(1-x²))` up to degree `n`.
fn exp_series(sign: i64, n: usize) -> Vec<Rational> {
    // w = sign · Σ_{k≥1} x^{2k}
    let w = |k: usize| -> Rational {
        if k > 0 && k % 2 == 0 {
            Rational::from_integer(BigInt::from(sign))
        } else {
            Rational::zero()
        }
    };
    let mut e = vec![Rational::one()];
    for m in 1..=n {
        let mut acc = Rational::zero();
        for k in 1..=m {
            let wk = w(k);
            if !wk.is_zero() {
                acc += Rational::from_integer(BigInt::from(k)) * wk * &e[m - k];
            }
        }
        e.push(acc / Rational::from_integer(BigInt::from(m)));
    }
    e
}

fn factorial(n: usize) -> Rational {
    Rational::from_integer((1..=n).map(BigInt::from).product())
}

/// `ψ_{d,r}(x) = P(x) · T(x)` with `P` a polynomial of degree at most `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BumpSpec {
    pub d: usize,
    pub r: usize,
    /// Coefficients of `ψ = Σ cᵢ xⁱ ρ(x)`; `cᵢ = e · γᵢ`.
    pub coeffs: Vec<f64>,
    /// Exact coefficients `γᵢ` of `P`.
    #[serde(with = "crate::rational_serde::vec")]
    pub gamma: Vec<Rational>,
    #[serde(skip)]
    gamma_f64: Vec<f64>,
}

/// The bump with `ψ^{(k)}(0) = δ_{rk}` for all `k ≤ d`.
///
/// # Panics
/// If `r > d`.
pub fn bump_psi(d: usize, r: usize) -> BumpSpec {
    assert!(r <= d, "derivative index {r} exceeds degree bound {d}");
    let inverse = exp_series(1, d);
    let scale = factorial(r).recip();
    let mut gamma = vec![Rational::zero(); d + 1];
    for (i, c) in inverse.iter().enumerate().take(d + 1 - r) {
        gamma[i + r] = c * &scale;
    }
    let gamma_f64: Vec<f64> = gamma.iter().map(to_f64).collect();
    let e = std::f64::consts::E;
    BumpSpec {
        d,
        r,
        coeffs: gamma_f64.iter().map(|g| e * g).collect(),
        gamma,
        gamma_f64,
    }
}

impl BumpSpec {
    /// `ψ^{(k)}(0)`, exact.
    pub fn derivative_at_zero(&self, k: usize) -> Rational {
        let t = exp_series(-1, k);
        let coeff: Rational = (0..=k.min(self.d))
            .map(|i| &self.gamma[i] * &t[k - i])
            .sum();
        coeff * factorial(k)
    }

    pub fn value(&self, x: f64) -> f64 {
        if x.abs() >= 1.0 {
            return 0.0;
        }
        let w = -x * x / (1.0 - x * x);
        if w < UNDERFLOW_EXPONENT {
            return 0.0;
        }
        horner(&self.gamma_f64, x) * w.exp()
    }

    /// `[ψ(x), ψ'(x), …, ψ^{(order)}(x)]` by truncated Taylor arithmetic.
    pub fn derivatives(&self, x: f64, order: usize) -> Vec<f64> {
        let mut out = vec![0.0; order + 1];
        if x.abs() >= 1.0 {
            return out;
        }
        let d0 = 1.0 - x * x;
        if 1.0 - 1.0 / d0 < UNDERFLOW_EXPONENT {
            return out;
        }
        // q = 1 / (d0 - 2x h - h²)
        let mut q = vec![0.0; order + 1];
        q[0] = 1.0 / d0;
        for n in 1..=order {
            let mut acc = -2.0 * x * q[n - 1];
            if n >= 2 {
                acc -= q[n - 2];
            }
            q[n] = -acc / d0;
        }
        // T = exp(1 - q)
        let mut w = q.iter().map(|v| -v).collect::<Vec<_>>();
        w[0] += 1.0;
        let mut t = vec![0.0; order + 1];
        t[0] = w[0].exp();
        for n in 1..=order {
            let acc: f64 = (1..=n).map(|k| k as f64 * w[k] * t[n - k]).sum();
            t[n] = acc / n as f64;
        }
        let p = taylor_at(&self.gamma_f64, x, order);
        let mut fact = 1.0;
        for n in 0..=order {
            if n > 0 {
                fact *= n as f64;
            }
            let coeff: f64 = (0..=n).map(|k| p[k] * t[n - k]).sum();
            out[n] = coeff * fact;
        }
        out
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Taylor coefficients of the polynomial at `x0`, truncated at `order`.
fn taylor_at(coeffs: &[f64], x0: f64, order: usize) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    let n = c.len();
    for i in 0..n {
        for k in (i..n - 1).rev() {
            c[k] += x0 * c[k + 1];
        }
    }
    c.resize(order.max(n - 1) + 1, 0.0);
    c.truncate(order + 1);
    c
}

/// `φ(x, y) = ψ_{d,i}(x) ψ_{d,j}(y)` with `∂^{k+l}φ(0,0) = δ_{ik} δ_{jl}` for `k, l ≤ d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BumpSpec2D {
    pub d: usize,
    pub i: usize,
    pub j: usize,
    pub psi_x: BumpSpec,
    pub psi_y: BumpSpec,
}

pub fn bump_phi(d: usize, i: usize, j: usize) -> BumpSpec2D {
    BumpSpec2D {
        d,
        i,
        j,
        psi_x: bump_psi(d, i),
        psi_y: bump_psi(d, j),
    }
}

impl BumpSpec2D {
    pub fn value(&self, x: f64, y: f64) -> f64 {
        let vx = self.psi_x.value(x);
        if vx == 0.0 {
            return 0.0;
        }
        vx * self.psi_y.value(y)
    }

    /// `∂^{k+l}φ/∂x^k∂y^l (0,0)`, exact.
    pub fn partial_at_origin(&self, k: usize, l: usize) -> Rational {
        self.psi_x.derivative_at_zero(k) * self.psi_y.derivative_at_zero(l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn central_difference(f: &dyn Fn(f64) -> f64, k: usize, h: f64) -> f64 {
        // k-th central difference at 0 divided by h^k
        let mut acc = 0.0;
        let mut binom = 1.0;
        for i in 0..=k {
            let x = (k as f64 / 2.0 - i as f64) * h;
            acc += if i % 2 == 0 { binom } else { -binom } * f(x);
            binom = binom * (k - i) as f64 / (i + 1) as f64;
        }
        acc / h.powi(k as i32)
    }

    #[test]
    fn degree_zero_and_one() {
        let e = std::f64::consts::E;
        let b = bump_psi(0, 0);
        assert!((b.coeffs[0] - e).abs() < 1e-15);
        assert!((b.value(0.0) - 1.0).abs() < 1e-15);
        let b = bump_psi(1, 1);
        assert_eq!(b.coeffs[0], 0.0);
        assert!((b.coeffs[1] - e).abs() < 1e-15);
        assert_eq!(b.derivative_at_zero(0), Rational::zero());
        assert_eq!(b.derivative_at_zero(1), Rational::one());
    }

    #[test]
    fn exact_kronecker_derivatives() {
        for d in 0..=8 {
            for r in 0..=d {
                let b = bump_psi(d, r);
                for k in 0..=d {
                    let expected = if k == r { Rational::one() } else { Rational::zero() };
                    assert_eq!(b.derivative_at_zero(k), expected, "d={d} r={r} k={k}");
                }
            }
        }
    }

    #[test]
    fn numeric_derivatives_match_finite_differences() {
        for (d, r) in [(0, 0), (1, 1), (3, 2), (5, 0), (5, 4)] {
            let b = bump_psi(d, r);
            for k in 0..=d.min(3) {
                let fd = central_difference(&|x| b.value(x), k, 1e-3);
                let expected = if k == r { 1.0 } else { 0.0 };
                assert!((fd - expected).abs() < 1e-5, "d={d} r={r} k={k}: {fd}");
            }
            // Taylor-mode derivatives agree with finite differences away from 0
            for &x in &[0.3, -0.55, 0.8] {
                let ds = b.derivatives(x, 3);
                assert!((ds[0] - b.value(x)).abs() < 1e-14);
                let h = 1e-4;
                let fd1 = (b.value(x + h) - b.value(x - h)) / (2.0 * h);
                assert!((ds[1] - fd1).abs() < 1e-6 * (1.0 + fd1.abs()), "x={x}");
                let fd2 = (b.value(x + h) - 2.0 * b.value(x) + b.value(x - h)) / (h * h);
                assert!((ds[2] - fd2).abs() < 1e-4 * (1.0 + fd2.abs()), "x={x}");
            }
        }
    }

    #[test]
    fn support_and_underflow() {
        let b = bump_psi(4, 2);
        assert_eq!(b.value(1.0), 0.0);
        assert_eq!(b.value(-1.5), 0.0);
        assert_eq!(b.derivatives(0.9999, 4), vec![0.0; 5]);
        assert!(b.value(0.99).abs() < 1e-20);
    }

    #[test]
    fn two_dimensional_partials() {
        let phi = bump_phi(5, 1, 2);
        for k in 0..=5 {
            for l in 0..=5 {
                let expected = if (k, l) == (1, 2) { Rational::one() } else { Rational::zero() };
                assert_eq!(phi.partial_at_origin(k, l), expected);
            }
        }
        assert_eq!(phi.value(0.5, 1.0), 0.0);
    }
}
