//! Pole detection for the real zeta function of bivariate weighted homogeneous
//! polynomials.
//!
//! Given `f ∈ ℚ[x, y]` weighted homogeneous of type `(a, b; m)` with an isolated
//! singularity at the origin, every root `s₀ = -d/m` of the Bernstein–Sato
//! polynomial inside `(-1, 0)` is classified as a pole or a non-pole of
//!
//! ```text
//! Z_{f,φ}(s) = ∫ |f(x, y)|^s φ(x, y) dx dy
//! ```
//!
//! for some test function `φ`. The root is a pole exactly when, for some
//! representation `d = (j+1)a + (k+1)b`, the line integral
//!
//! ```text
//! ∫_ℝ (|f(1,u)|^{s₀} + (-1)^j |f(-1,u)|^{s₀}) u^k du
//! ```
//!
//! does not vanish. Parity symmetries of `f` kill some of these integrals
//! exactly; the rest are evaluated numerically by [`quadrature`].
//!
//! The [`zeta`] module is an independent validation path: it evaluates the zeta
//! function itself (directly and through its analytic continuation) and fits
//! residues at the candidate poles.

pub mod bsroots;
pub mod chainrule;
pub mod cli;
pub mod criterion;
pub mod family;
pub mod poly;
pub mod quadrature;
pub mod report;
pub mod zeta;

mod error;
pub(crate) mod sum;

pub use error::Error;
pub use poly::{parse_poly, Poly, Weights};

pub type Rational = num_rational::BigRational;

/// Serialize rationals as `"p/q"` strings (or `"p"` for integers).
pub mod rational_serde {
    use num_rational::BigRational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        text.parse::<BigRational>().map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(values: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(values.len()))?;
            for v in values {
                seq.serialize_element(&v.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
            let texts = Vec::<String>::deserialize(d)?;
            texts
                .iter()
                .map(|t| t.parse::<BigRational>().map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod option_vec {
        use super::*;

        pub fn serialize<S: Serializer>(values: &Option<Vec<BigRational>>, s: S) -> Result<S::Ok, S::Error> {
            match values {
                Some(v) => s.serialize_some(&v.iter().map(ToString::to_string).collect::<Vec<_>>()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigRational>>, D::Error> {
            let texts = Option::<Vec<String>>::deserialize(d)?;
            texts
                .map(|ts| {
                    ts.iter()
                        .map(|t| t.parse::<BigRational>().map_err(D::Error::custom))
                        .collect()
                })
                .transpose()
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(value: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
            match value {
                Some(v) => s.serialize_some(&v.to_string()),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> Result<Option<BigRational>, D::Error> {
            let text = Option::<String>::deserialize(d)?;
            text.map(|t| t.parse::<BigRational>().map_err(D::Error::custom))
                .transpose()
        }
    }
}

/// Lossy conversion used at the exact/floating boundary.
pub(crate) fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or_else(|| {
        // numerator or denominator overflowed f64; scale both down
        let n = q.numer().bits() as i64;
        let d = q.denom().bits() as i64;
        let shift = (n.max(d) - 1000).max(0) as usize;
        let num = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let den = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        num / den
    })
}
