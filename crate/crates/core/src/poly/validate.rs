//! Certificate that the origin is an isolated singular point.
//!
//! Two checks, both exact:
//! 1. `f(1, u)` and `f(-1, u)` are squarefree;
//! 2. `Res_y(f_x, f_y)` is a nonzero monomial in `x` and `Res_x(f_x, f_y)` a
//!    nonzero monomial in `y`, so any common zero of the partials has `x = y = 0`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{Poly, PolyError, Sign, UniPoly};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `f(±1, u)` shares a factor with its derivative.
    RepeatedRestrictionFactor { sign: Sign, gcd: String },
    /// A resultant of the partials vanishes away from the origin.
    ResultantNotMonomial { eliminated: char, resultant: String },
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::RepeatedRestrictionFactor { sign, gcd } => {
                let x = if *sign == Sign::Plus { "1" } else { "-1" };
                write!(f, "f({x}, u) has the repeated factor {gcd}")
            }
            Certificate::ResultantNotMonomial {
                eliminated,
                resultant,
            } => write!(
                f,
                "resultant of f_x, f_y eliminating {eliminated} is `{resultant}`, not a nonzero monomial"
            ),
        }
    }
}

/// Accepts `f` only if the origin is a singular point of `f = 0` and the only one.
pub fn validate_isolated_singularity(f: &Poly) -> Result<(), PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if !f.coeff(0, 0).is_zero() {
        return Err(PolyError::SmoothAtOrigin("f(0,0) ≠ 0".into()));
    }
    if !f.coeff(1, 0).is_zero() || !f.coeff(0, 1).is_zero() {
        return Err(PolyError::SmoothAtOrigin("nonzero linear part".into()));
    }
    for sign in Sign::both() {
        let g = f.restrict(sign);
        if !g.is_squarefree() {
            return Err(PolyError::NonIsolatedSingularity(
                Certificate::RepeatedRestrictionFactor {
                    sign,
                    gcd: g.gcd(&g.derivative()).to_string(),
                },
            ));
        }
    }
    let (fx, fy) = (f.diff_x(), f.diff_y());
    let res_y = resultant_y(&fx, &fy);
    if !res_y.is_monomial() {
        return Err(PolyError::NonIsolatedSingularity(
            Certificate::ResultantNotMonomial {
                eliminated: 'y',
                resultant: res_y.to_string().replace('u', "x"),
            },
        ));
    }
    let res_x = resultant_y(&fx.swap_xy(), &fy.swap_xy());
    if !res_x.is_monomial() {
        return Err(PolyError::NonIsolatedSingularity(
            Certificate::ResultantNotMonomial {
                eliminated: 'x',
                resultant: res_x.to_string().replace('u', "y"),
            },
        ));
    }
    Ok(())
}

/// `Res_y(p, q)` as a polynomial in `x`, via a fraction-free Sylvester determinant.
pub(crate) fn resultant_y(p: &Poly, q: &Poly) -> UniPoly {
    if p.is_zero() || q.is_zero() {
        return UniPoly::zero();
    }
    let pc = p.coeffs_in_y();
    let qc = q.coeffs_in_y();
    let (dp, dq) = (pc.len() - 1, qc.len() - 1);
    let n = dp + dq;
    if n == 0 {
        return UniPoly::one();
    }
    let mut mat = vec![vec![UniPoly::zero(); n]; n];
    for row in 0..dq {
        for (i, c) in pc.iter().rev().enumerate() {
            mat[row][row + i] = c.clone();
        }
    }
    for row in 0..dp {
        for (i, c) in qc.iter().rev().enumerate() {
            mat[dq + row][row + i] = c.clone();
        }
    }
    bareiss_det(mat)
}

/// Determinant over ℚ[x]; every division in the Bareiss recurrence is exact.
fn bareiss_det(mut mat: Vec<Vec<UniPoly>>) -> UniPoly {
    let n = mat.len();
    let mut sign = Rational::one();
    let mut prev = UniPoly::one();
    for k in 0..n {
        if mat[k][k].is_zero() {
            match (k + 1..n).find(|&r| !mat[r][k].is_zero()) {
                Some(r) => {
                    mat.swap(k, r);
                    sign = -sign;
                }
                None => return UniPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = mat[k][k].mul(&mat[i][j]).sub(&mat[i][k].mul(&mat[k][j]));
                let (quot, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                mat[i][j] = quot;
            }
            mat[i][k] = UniPoly::zero();
        }
        prev = mat[k][k].clone();
    }
    mat[n - 1][n - 1].scale(&sign)
}
