use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{zeta_continued, BumpSpec2D, ZetaError};
use crate::bsroots::representations;
use crate::chainrule::cijk_table;
use crate::criterion::{symmetry_class, vanishes_by_symmetry};
use crate::poly::{Poly, Weights};
use crate::quadrature::{singular_integral, Tolerances};
use crate::{to_f64, Rational};

/// Offsets `ε` of the symmetric samples `s₀ ± ε`.
pub const FIT_EPSILONS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// Relative agreement required between the last two extrapolants, before the 10× margin.
pub const FIT_TOL: f64 = 1e-4;

/// Absolute floor for the agreement test, so a vanishing residue does not demand
/// relative accuracy.
const FIT_ABS: f64 = 1e-7;

fn window_check(w: &Weights, d: u64) -> Result<Vec<(u32, u32)>, ZetaError> {
    let reps = representations(w, d);
    if d < w.a + w.b || d >= w.m || reps.is_empty() {
        return Err(ZetaError::NotInWindow { d, weights: w.to_string() });
    }
    Ok(reps)
}

/// `Res_{s=-d/m} Z_{f,φ}` from the residue of `1/(ms + d)` and the finite sum for
/// `(Φ₊ + Φ₋)(-d/m)`:
///
/// ```text
/// (-1)^{m-d-1} (m-d)! Σ_{(i+1)a+(j+1)b=d} c_ij0 ∂^{i+j}φ(0,0) I(i, j, -d/m)
/// ```
///
/// with `c_ij0` taken from the order `d - a - b` chain-rule table.
pub fn residue_closed_form(f: &Poly, w: &Weights, d: u64, phi: &BumpSpec2D, tol: &Tolerances) -> Result<f64, ZetaError> {
    let reps = window_check(w, d)?;
    let table = cijk_table(w.a as u32, w.b as u32, (d - w.a - w.b) as u32);
    let sym = symmetry_class(f);
    let s0 = Rational::new(-BigInt::from(d), BigInt::from(w.m));

    let mut sum = 0.0;
    for (i, j) in reps {
        let partial = phi.partial_at_origin(i as usize, j as usize);
        if partial.is_zero() || vanishes_by_symmetry(&sym, i, j) {
            continue;
        }
        let c = Rational::from_integer(BigInt::from(table.get(i, j, 0)));
        let integral = singular_integral(f, &s0, i, j, tol)?;
        sum += to_f64(&(c * partial)) * integral.value;
    }

    let excess = w.m - d;
    let mut factor: Rational = (1..=excess).map(|k| Rational::from_integer(k.into())).product();
    if (excess + 1) % 2 == 1 {
        factor = -factor;
    }
    // (-1)^N a / (m Π_{k≠d} (k - d))
    let mut prefactor = Rational::from_integer(w.a.into()) / Rational::from_integer(w.m.into());
    for k in (w.a + w.b)..=w.m {
        if k != d {
            prefactor /= Rational::from_integer(BigInt::from(k as i64 - d as i64));
        }
    }
    if (w.m + 1 - w.a - w.b) % 2 == 1 {
        prefactor = -prefactor;
    }
    Ok(to_f64(&(prefactor * factor)) * sum)
}

/// Residue estimates from the symmetric two-point samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSamples {
    /// `R(ε) = ε (Z(s₀+ε) - Z(s₀-ε)) / 2` for each entry of [`FIT_EPSILONS`].
    pub raw: [f64; 3],
    /// First Richardson step in `ε²` on consecutive pairs.
    pub first_order: [f64; 2],
    pub residue: f64,
}

impl FitSamples {
    /// Extrapolates `R(ε) = R + c₁ε² + c₂ε⁴ + …` with `ε` halving between samples.
    pub fn from_raw(raw: [f64; 3]) -> Self {
        let first_order = [(4.0 * raw[1] - raw[0]) / 3.0, (4.0 * raw[2] - raw[1]) / 3.0];
        let residue = (16.0 * first_order[1] - first_order[0]) / 15.0;
        Self { raw, first_order, residue }
    }

    /// Accepts the extrapolant when it agrees with the finest first-order estimate.
    pub fn check(&self, rel: f64) -> Result<f64, ZetaError> {
        let limit = 10.0 * (rel * self.residue.abs()).max(FIT_ABS);
        let (first, second) = (self.first_order[1], self.residue);
        if !((first - second).abs() <= limit) {
            return Err(ZetaError::FitUnstable { first, second, limit });
        }
        Ok(self.residue)
    }
}

/// Samples of `zeta_continued` around `s₀ = -d/m` and their extrapolation.
pub fn residue_fit_samples(f: &Poly, w: &Weights, d: u64, phi: &BumpSpec2D, tol: &Tolerances) -> Result<FitSamples, ZetaError> {
    window_check(w, d)?;
    let s0 = -(d as f64) / w.m as f64;
    let points: Vec<f64> = FIT_EPSILONS.iter().flat_map(|&e| [s0 + e, s0 - e]).collect();
    let values: Vec<f64> = points
        .par_iter()
        .map(|&s| zeta_continued(f, w, phi, s, tol))
        .collect::<Result<_, _>>()?;
    let mut raw = [0.0; 3];
    for (slot, (e, pair)) in raw.iter_mut().zip(FIT_EPSILONS.iter().zip(values.chunks(2))) {
        *slot = e * (pair[0] - pair[1]) / 2.0;
    }
    Ok(FitSamples::from_raw(raw))
}

/// `Res_{s=-d/m} Z_{f,φ}` fitted from samples of the continuation.
pub fn residue_numeric_fit(f: &Poly, w: &Weights, d: u64, phi: &BumpSpec2D, tol: &Tolerances) -> Result<f64, ZetaError> {
    residue_fit_samples(f, w, d, phi, tol)?.check(FIT_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_poly;
    use crate::poly::resolve_weights;
    use crate::zeta::bump_phi;

    const CUSP_I00: f64 = 13.270393927727888790689997853863627;

    fn cusp() -> (Poly, Weights) {
        let f = parse_poly("x^2 + y^3").unwrap();
        let w = resolve_weights(&f, None).unwrap();
        (f, w)
    }

    #[test]
    fn model_function_is_recovered_exactly() {
        let (r, c0, s0) = (2.5, -7.0, -0.4);
        let z = |s: f64| r / (s - s0) + c0;
        let raw = FIT_EPSILONS.map(|e| e * (z(s0 + e) - z(s0 - e)) / 2.0);
        let fit = FitSamples::from_raw(raw);
        assert!((fit.residue - r).abs() < 1e-12);
        assert!(raw.iter().all(|v| (v - r).abs() < 1e-12));
        assert!(fit.check(FIT_TOL).is_ok());
        let noisy = FitSamples::from_raw([1.0, 2.0, 3.0]);
        assert!(matches!(noisy.check(FIT_TOL), Err(ZetaError::FitUnstable { .. })));
    }

    #[test]
    fn cusp_closed_form() {
        let (f, w) = cusp();
        let phi = bump_phi(5, 0, 0);
        let res = residue_closed_form(&f, &w, 5, &phi, &Tolerances::default()).unwrap();
        // a/m · c₀₀₀ · I(0,0) with a/m = 1/2
        assert!((res - 0.5 * CUSP_I00).abs() < 1e-8, "{res}");
    }

    #[test]
    fn cusp_fit_matches_closed_form() {
        let (f, w) = cusp();
        let phi = bump_phi(6, 0, 0);
        let tol = Tolerances::default();
        let closed = residue_closed_form(&f, &w, 5, &phi, &tol).unwrap();
        let fit = residue_numeric_fit(&f, &w, 5, &phi, &tol).unwrap();
        assert!(((fit - closed) / closed).abs() < 1e-3, "{fit} vs {closed}");
    }

    #[test]
    fn symmetric_root_has_zero_residue() {
        let f = parse_poly("x^4 + y^3").unwrap();
        let w = resolve_weights(&f, None).unwrap();
        let tol = Tolerances::default();
        let phi = bump_phi(12, 1, 0);
        assert_eq!(residue_closed_form(&f, &w, 10, &phi, &tol).unwrap(), 0.0);
        let phi = bump_phi(12, 0, 0);
        assert_eq!(residue_closed_form(&f, &w, 10, &phi, &tol).unwrap(), 0.0);
        let fit = residue_numeric_fit(&f, &w, 10, &phi, &tol).unwrap();
        assert!(fit.abs() < 1e-6, "{fit}");
    }

    #[test]
    fn closed_form_carries_factorial_of_excess() {
        // d = 7 on x⁴+y³: m - d = 5, so the finite sum is scaled by 5! = 120
        let f = parse_poly("x^4 + y^3").unwrap();
        let w = resolve_weights(&f, None).unwrap();
        let tol = Tolerances::default();
        let phi = bump_phi(12, 0, 0);
        let closed = residue_closed_form(&f, &w, 7, &phi, &tol).unwrap();
        let fit = residue_numeric_fit(&f, &w, 7, &phi, &tol).unwrap();
        assert!(((fit - closed) / closed).abs() < 1e-6, "{fit} vs {closed}");
        // the same residue straight from the Taylor expansion of φ: (a/m) I(0,0,-7/12)
        assert!((closed - 0.25 * 11.134136271004754251).abs() < 1e-8, "{closed}");
    }

    #[test]
    fn vanishing_partials_give_zero() {
        let (f, w) = cusp();
        let phi = bump_phi(6, 1, 1);
        assert_eq!(residue_closed_form(&f, &w, 5, &phi, &Tolerances::default()).unwrap(), 0.0);
    }

    #[test]
    fn outside_window_is_rejected() {
        let (f, w) = cusp();
        let phi = bump_phi(6, 0, 0);
        assert!(matches!(
            residue_closed_form(&f, &w, 3, &phi, &Tolerances::default()),
            Err(ZetaError::NotInWindow { .. })
        ));
    }
}
