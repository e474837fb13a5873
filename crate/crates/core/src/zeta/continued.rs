use std::sync::Mutex;

use num_traits::ToPrimitive;

use super::{BumpSpec2D, ZetaError};
use crate::chainrule::cijk_table;
use crate::poly::{Poly, Sign, Weights};
use crate::quadrature::{integrate_endpoint, integrate_line, LineWeight, QuadratureError, Tolerances};

/// One chain-rule term `c · α^i u^j t^k ∂^{i+j}φ`.
#[derive(Debug, Clone, Copy)]
struct Term {
    c: f64,
    i: usize,
    j: usize,
    k: i32,
}

/// `W_α(u) = ∫_0^∞ t^{p} d^N/dt^N φ(α t^a, t^b u) dt` with `p = m(s+1)`.
///
/// The high derivatives of a bump cancel almost completely under the integral, so
/// `r` derivatives are moved back onto `t^p` first:
/// `W = (-1)^r (p)_r ∫ t^{p-r} d^{N-r}/dt^{N-r} φ dt`, the boundary terms vanishing
/// while `p - j > 0` (a small margin is kept). Support of `φ` restricts `t` to `[0, T]`,
/// `T = min(1, |u|^{-1/b})`; after `t = Tτ` the inner integral carries the weight
/// `τ^{p-r}` on `[0, 1]`.
struct PhiWeight<'a> {
    alpha: f64,
    a: i32,
    b: i32,
    /// `p - r`.
    power: f64,
    /// `(-1)^r (p)_r`.
    scale: f64,
    /// `(ms + a + b)/b`.
    gamma: f64,
    terms: Vec<Term>,
    max_i: usize,
    max_j: usize,
    phi: &'a BumpSpec2D,
    tol: Tolerances,
    failure: Mutex<Option<QuadratureError>>,
}

impl PhiWeight<'_> {
    /// `∫_0^1 τ^{m(s+1)} Σ coef(term) τ^k ψ₁^{(i)}(A τ^a) ψ₂^{(j)}(B τ^b) dτ`.
    fn inner(&self, coef: impl Fn(&Term) -> f64, x_scale: f64, y_scale: f64) -> f64 {
        let coefs: Vec<f64> = self.terms.iter().map(&coef).collect();
        let h = |tau: f64| {
            let dx = self.phi.psi_x.derivatives(x_scale * tau.powi(self.a), self.max_i);
            if dx.iter().all(|&v| v == 0.0) {
                return 0.0;
            }
            let dy = self.phi.psi_y.derivatives(y_scale * tau.powi(self.b), self.max_j);
            self.terms
                .iter()
                .zip(&coefs)
                .map(|(t, c)| c * tau.powi(t.k) * dx[t.i] * dy[t.j])
                .sum::<f64>()
        };
        match integrate_endpoint(self.power, 1.0, h, &self.tol, 0.0) {
            Ok((v, _)) => self.scale * v,
            Err(e) => {
                let value = match &e {
                    QuadratureError::Failure { value, .. } if value.is_finite() => *value,
                    _ => 0.0,
                };
                self.failure.lock().expect("failure slot").get_or_insert(e);
                self.scale * value
            }
        }
    }
}

fn signed_pow(x: f64, e: usize) -> f64 {
    x.powi(e as i32)
}

impl LineWeight for PhiWeight<'_> {
    fn value(&self, u: f64) -> f64 {
        let alpha = self.alpha;
        if u.abs() <= 1.0 {
            return self.inner(|t| t.c * signed_pow(alpha, t.i) * signed_pow(u, t.j), alpha, u);
        }
        let big_t = u.abs().powf(-1.0 / self.b as f64);
        let scaled = self.inner(
            |t| t.c * signed_pow(alpha, t.i) * signed_pow(u, t.j) * big_t.powi(t.k),
            alpha * big_t.powi(self.a),
            u.signum(),
        );
        scaled * big_t.powf(self.power + 1.0)
    }

    fn breaks(&self) -> Vec<f64> {
        vec![-1.0, 1.0]
    }

    fn tail_gamma(&self) -> f64 {
        self.gamma
    }

    fn tail_power(&self) -> u32 {
        self.b as u32
    }

    fn tail(&self, w: f64, sigma: f64) -> f64 {
        let alpha = self.alpha;
        let a = self.a;
        self.inner(
            |t| t.c * signed_pow(alpha, t.i) * signed_pow(sigma, t.j) * w.powi(t.i as i32 * a),
            alpha * w.powi(a),
            sigma,
        )
    }
}

/// Below this the remaining exponent `p - r` would approach `-1`, where Gauss–Jacobi
/// rules lose accuracy.
const REDUCTION_MARGIN: f64 = 0.05;

/// Number of integrations by parts `r ≤ n` taken on `t^p`.
fn reduction_steps(p: f64, n: u32) -> u32 {
    (0..n).take_while(|&j| p - j as f64 > REDUCTION_MARGIN).count() as u32
}

/// `Φ₊(s) + Φ₋(s)` with `Φ_α(s) = ∫ |f(α,u)|^s W_α(u) du`, `s > -1`.
pub fn phi_plus_minus(f: &Poly, w: &Weights, phi: &BumpSpec2D, s: f64, tol: &Tolerances) -> Result<f64, ZetaError> {
    phi_plus_minus_reduced(f, w, phi, s, tol, true)
}

fn phi_plus_minus_reduced(f: &Poly, w: &Weights, phi: &BumpSpec2D, s: f64, tol: &Tolerances, reduce: bool) -> Result<f64, ZetaError> {
    if !(s > -1.0) {
        return Err(ZetaError::OutOfDomain { s, domain: "s > -1" });
    }
    let (a, b, m) = (w.a as u32, w.b as u32, w.m as u32);
    let n = m + 1 - a - b;
    let p = m as f64 * (s + 1.0);
    let r = if reduce { reduction_steps(p, n) } else { 0 };
    let mut scale = 1.0;
    for j in 0..r {
        scale *= -(p - j as f64);
    }
    let table = cijk_table(a, b, n - r);
    let terms: Vec<Term> = table
        .entries
        .iter()
        .map(|(&(i, j, k), c)| Term {
            c: c.to_f64().expect("finite coefficient"),
            i: i as usize,
            j: j as usize,
            k: k as i32,
        })
        .collect();
    let max_i = terms.iter().map(|t| t.i).max().unwrap_or(0);
    let max_j = terms.iter().map(|t| t.j).max().unwrap_or(0);
    let inner_tol = Tolerances {
        rel_err: tol.rel_err * 1e-3,
        ..tol.clone()
    };

    let mut total = 0.0;
    for sign in Sign::both() {
        let weight = PhiWeight {
            alpha: sign.as_f64(),
            a: a as i32,
            b: b as i32,
            power: p - r as f64,
            scale,
            gamma: (m as f64 * s + (a + b) as f64) / b as f64,
            terms: terms.clone(),
            max_i,
            max_j,
            phi,
            tol: inner_tol.clone(),
            failure: Mutex::new(None),
        };
        let g = f.restrict(sign);
        let result = integrate_line(&[(1.0, g)], s, &weight, tol)?;
        if let Some(e) = weight.failure.into_inner().expect("failure slot") {
            return Err(e.into());
        }
        total += result.value;
    }
    Ok(total)
}

/// `Z_{f,φ}(s)` for `s > -1` away from the zeros of `Π_{k=a+b}^{m}(ms + k)`.
pub fn zeta_continued(f: &Poly, w: &Weights, phi: &BumpSpec2D, s: f64, tol: &Tolerances) -> Result<f64, ZetaError> {
    let mut denominator = 1.0;
    for k in (w.a + w.b)..=w.m {
        let factor = w.m as f64 * s + k as f64;
        if factor.abs() < 1e-12 {
            return Err(ZetaError::EvaluationAtPole { s, k });
        }
        denominator *= factor;
    }
    let n = w.m + 1 - w.a - w.b;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let phis = phi_plus_minus(f, w, phi, s, tol)?;
    Ok(sign * w.a as f64 / denominator * phis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_poly;
    use crate::poly::resolve_weights;
    use crate::quadrature::integrate_interval;
    use crate::zeta::{bump_phi, zeta_direct};

    fn setup(text: &str) -> (Poly, Weights, BumpSpec2D) {
        let f = parse_poly(text).unwrap();
        let w = resolve_weights(&f, None).unwrap();
        let phi = bump_phi(w.m as usize, 0, 0);
        (f, w, phi)
    }

    #[test]
    fn value_at_zero_is_mass() {
        let (f, w, phi) = setup("x^2 + y^3");
        let tol = Tolerances::default();
        let (half, _) = integrate_interval(|x| phi.psi_x.value(x), 0.0, 1.0, vec![], &tol, 0.0).unwrap();
        let mass = 4.0 * half * half;
        let z = zeta_continued(&f, &w, &phi, 0.0, &tol).unwrap();
        assert!((z - mass).abs() < 1e-6, "{z} vs {mass}");
    }

    #[test]
    fn cusp_agrees_with_direct() {
        let (f, w, phi) = setup("x^2 + y^3");
        let tol = Tolerances::default();
        let direct = zeta_direct(&f, &phi, 0.5, &tol).unwrap();
        let continued = zeta_continued(&f, &w, &phi, 0.5, &tol).unwrap();
        assert!(((direct - continued) / direct).abs() < 1e-5, "{direct} vs {continued}");
    }

    #[test]
    fn reduction_preserves_value() {
        let (f, w, phi) = setup("x^2 + y^3");
        let tol = Tolerances::default();
        for s in [-0.3, 0.5] {
            let reduced = phi_plus_minus(&f, &w, &phi, s, &tol).unwrap();
            let plain = phi_plus_minus_reduced(&f, &w, &phi, s, &tol, false).unwrap();
            assert!(((reduced - plain) / plain).abs() < 1e-8, "s={s}: {reduced} vs {plain}");
        }
        assert_eq!(reduction_steps(5.12, 6), 6);
        assert_eq!(reduction_steps(4.97, 6), 5);
        assert_eq!(reduction_steps(2.0, 6), 2);
        assert_eq!(reduction_steps(1.0006, 6), 1);
    }

    #[test]
    fn refuses_pole() {
        let (f, w, phi) = setup("x^2 + y^3");
        assert!(matches!(
            zeta_continued(&f, &w, &phi, -5.0 / 6.0, &Tolerances::default()),
            Err(ZetaError::EvaluationAtPole { k: 5, .. })
        ));
    }

    #[test]
    fn pole_factor_isolates() {
        let (f, w, phi) = setup("x^2 + y^3");
        let tol = Tolerances::default();
        let residue = crate::zeta::residue_closed_form(&f, &w, 5, &phi, &tol).unwrap();
        let scaled: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|e| {
                let s = -5.0 / 6.0 + e;
                (6.0 * s + 5.0) * zeta_continued(&f, &w, &phi, s, &tol).unwrap()
            })
            .collect();
        // (6s + 5) Z(s) = 6 Res + O(s - s₀)
        let gaps: Vec<f64> = scaled.iter().map(|v| (v - 6.0 * residue).abs()).collect();
        assert!(gaps[1] < 0.2 * gaps[0] && gaps[2] < 0.2 * gaps[1], "{scaled:?} vs {}", 6.0 * residue);
    }
}

