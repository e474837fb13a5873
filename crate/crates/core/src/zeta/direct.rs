use std::sync::Mutex;

use super::{BumpSpec2D, ZetaError};
use crate::poly::{resolve_weights, Poly, Sign};
use crate::quadrature::engine::expand_at_roots;
use crate::quadrature::{integrate_interval, QuadratureError, Tolerances};

/// `∫_{[-1,1]²} |f(x,y)|^s φ(x,y) dx dy` for `s > 0` by iterated adaptive quadrature.
///
/// The inner `y` integral is split where `f(x, ·)` vanishes. With `f` weighted
/// homogeneous of type `(a, b; m)` these zeros are `|x|^{b/a} u` for the real roots `u`
/// of `f(±1, u)`.
pub fn zeta_direct(f: &Poly, phi: &BumpSpec2D, s: f64, tol: &Tolerances) -> Result<f64, ZetaError> {
    if !(s > 0.0) {
        return Err(ZetaError::OutOfDomain { s, domain: "s > 0" });
    }
    let w = resolve_weights(f, None).map_err(QuadratureError::from)?;
    let b_over_a = w.b as f64 / w.a as f64;
    let mut anchors = [Vec::new(), Vec::new()];
    for (slot, sign) in anchors.iter_mut().zip(Sign::both()) {
        let g = f.restrict(sign);
        if !g.is_zero() {
            *slot = expand_at_roots(&g, &tol.root_width).map_err(QuadratureError::from)?
                .into_iter()
                .map(|r| r.anchor)
                .collect();
        }
    }
    let inner_tol = Tolerances {
        rel_err: tol.rel_err * 1e-2,
        ..tol.clone()
    };
    let failure: Mutex<Option<QuadratureError>> = Mutex::new(None);

    let inner = |x: f64| -> f64 {
        let px = phi.psi_x.value(x);
        if px == 0.0 {
            return 0.0;
        }
        let roots = if x >= 0.0 { &anchors[0] } else { &anchors[1] };
        let scale = x.abs().powf(b_over_a);
        let cuts: Vec<f64> = roots.iter().map(|u| u * scale).collect();
        let integrand = |y: f64| f.eval_f64(x, y).abs().powf(s) * phi.psi_y.value(y);
        match integrate_interval(integrand, -1.0, 1.0, cuts, &inner_tol, 0.0) {
            Ok((v, _)) => px * v,
            Err(e) => {
                let value = match &e {
                    QuadratureError::Failure { value, .. } if value.is_finite() => *value,
                    _ => 0.0,
                };
                failure.lock().expect("failure slot").get_or_insert(e);
                px * value
            }
        }
    };
    let (value, _) = integrate_interval(inner, -1.0, 1.0, vec![0.0], tol, 0.0)?;
    if let Some(e) = failure.into_inner().expect("failure slot") {
        return Err(e.into());
    }
    Ok(value)
}
