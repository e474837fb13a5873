//! Exact bivariate polynomials over ℚ and their weighted-homogeneity type.

mod parse;
mod univariate;
mod validate;

pub use parse::{parse_poly, ParseError, ParseErrorKind};
pub use univariate::{RootInterval, UniPoly};
pub use validate::{validate_isolated_singularity, Certificate};

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("the zero polynomial has no singularity to analyze")]
    ZeroPolynomial,
    #[error("polynomial is not weighted homogeneous: {0}")]
    NotWeightedHomogeneous(String),
    #[error("single-monomial support leaves the weights under-determined; pass explicit weights")]
    AmbiguousWeights,
    #[error("invalid weights ({a},{b};{m}): {reason}")]
    InvalidWeights { a: u64, b: u64, m: u64, reason: String },
    #[error("non-isolated singularity: {0}")]
    NonIsolatedSingularity(Certificate),
    #[error("f is smooth at the origin ({0})")]
    SmoothAtOrigin(String),
}

/// Sparse polynomial in `x`, `y` with rational coefficients.
///
/// Keys are exponent pairs `(p, q)` of `x^p y^q`; zero coefficients are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn y() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    pub fn monomial(c: Rational, p: u32, q: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((p, q), c);
        }
        Self { terms }
    }

    /// Builds a polynomial from `(coefficient, p, q)` triples, summing duplicates.
    pub fn from_terms<I>(iter: I) -> Self
    where
        I: IntoIterator<Item = (Rational, u32, u32)>,
    {
        let mut out = Self::zero();
        for (c, p, q) in iter {
            out.add_term(p, q, c);
        }
        out
    }

    /// Convenience for integer coefficients: `Poly::from_int_terms(&[(1, 4, 0), (1, 0, 3)])`.
    pub fn from_int_terms(terms: &[(i64, u32, u32)]) -> Self {
        Self::from_terms(
            terms
                .iter()
                .map(|&(c, p, q)| (Rational::from_integer(BigInt::from(c)), p, q)),
        )
    }

    fn add_term(&mut self, p: u32, q: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((p, q)).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(p, q));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, p: u32, q: u32) -> Rational {
        self.terms.get(&(p, q)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &Rational)> + '_ {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    pub fn support(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.terms.keys().copied()
    }

    pub fn degree_x(&self) -> u32 {
        self.support().map(|(p, _)| p).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.support().map(|(_, q)| q).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&k, v)| (k, v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(Rational::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(p, q), c) in &self.terms {
            acc += c * num_traits::pow(x.clone(), p as usize) * num_traits::pow(y.clone(), q as usize);
        }
        acc
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(p, q), c)| crate::to_f64(c) * x.powi(p as i32) * y.powi(q as i32))
            .sum()
    }

    pub fn diff_x(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((p, _), _)| *p > 0)
                .map(|(&(p, q), c)| (c * Rational::from_integer(BigInt::from(p)), p - 1, q)),
        )
    }

    pub fn diff_y(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|((_, q), _)| *q > 0)
                .map(|(&(p, q), c)| (c * Rational::from_integer(BigInt::from(q)), p, q - 1)),
        )
    }

    /// Exchanges the roles of `x` and `y`.
    pub fn swap_xy(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&(p, q), c)| ((q, p), c.clone())).collect(),
        }
    }

    /// `u ↦ f(sign, u)` with exact coefficients.
    pub fn restrict(&self, sign: Sign) -> UniPoly {
        let mut coeffs = vec![Rational::zero(); self.degree_y() as usize + 1];
        for (&(p, q), c) in &self.terms {
            let term = if sign == Sign::Minus && p % 2 == 1 { -c } else { c.clone() };
            coeffs[q as usize] += term;
        }
        UniPoly::new(coeffs)
    }

    /// Coefficients as polynomials in `x`, indexed by the power of `y`.
    pub(crate) fn coeffs_in_y(&self) -> Vec<UniPoly> {
        let mut rows = vec![Vec::new(); self.degree_y() as usize + 1];
        for (&(p, q), c) in &self.terms {
            let row = &mut rows[q as usize];
            if row.len() <= p as usize {
                row.resize(p as usize + 1, Rational::zero());
            }
            row[p as usize] = c.clone();
        }
        rows.into_iter().map(UniPoly::new).collect()
    }

    /// Whether `f(λ^a x, λ^b y) = λ^m f(x, y)` holds termwise.
    pub fn is_weighted_homogeneous(&self, w: &Weights) -> bool {
        self.support()
            .all(|(p, q)| p as u64 * w.a + q as u64 * w.b == w.m)
    }
}

impl fmt::Display for Poly {
    /// Prints in the same grammar accepted by [`parse_poly`], highest `x` power first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (&(p, q), c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (idx, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if !mag.is_one() || (p == 0 && q == 0) {
                factors.push(mag.to_string());
            }
            match p {
                0 => {}
                1 => factors.push("x".to_string()),
                _ => factors.push(format!("x^{p}")),
            }
            match q {
                0 => {}
                1 => factors.push("y".to_string()),
                _ => factors.push(format!("y^{q}")),
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_poly(&text).map_err(serde::de::Error::custom)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (&(p, q), c) in &rhs.terms {
            out.add_term(p, q, c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (&(p, q), c) in &rhs.terms {
            out.add_term(p, q, -c.clone());
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (&(p1, q1), c1) in &self.terms {
            for (&(p2, q2), c2) in &rhs.terms {
                out.add_term(p1 + p2, q1 + q2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(&k, v)| (k, -v)).collect(),
        }
    }
}

/// `x ↦ ±1` in the restrictions `f(±1, u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn both() -> [Sign; 2] {
        [Sign::Plus, Sign::Minus]
    }
}

/// Weighted-homogeneity type `(a, b; m)`: `f(λ^a x, λ^b y) = λ^m f(x, y)`.
///
/// Always stored normalized so that `gcd(a, b, m) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Weights {
    pub a: u64,
    pub b: u64,
    pub m: u64,
}

impl Weights {
    /// Validates and normalizes by `gcd(a, b, m)`.
    pub fn new(a: u64, b: u64, m: u64) -> Result<Self, PolyError> {
        let invalid = |reason: &str| PolyError::InvalidWeights {
            a,
            b,
            m,
            reason: reason.to_string(),
        };
        if a == 0 || b == 0 || m == 0 {
            return Err(invalid("all weights must be positive"));
        }
        if a > m || b > m {
            return Err(invalid("each variable weight must not exceed the degree"));
        }
        let g = a.gcd(&b).gcd(&m);
        Ok(Self {
            a: a / g,
            b: b / g,
            m: m / g,
        })
    }

    /// `m - a - b`, the order shift that appears throughout the continuation.
    pub fn excess(&self) -> i64 {
        self.m as i64 - self.a as i64 - self.b as i64
    }
}

impl fmt::Display for Weights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{})", self.a, self.b, self.m)
    }
}

impl std::str::FromStr for Weights {
    type Err = PolyError;

    /// Parses `"a,b,m"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<_> = s.split(',').map(str::trim).collect();
        let bad = || PolyError::InvalidWeights {
            a: 0,
            b: 0,
            m: 0,
            reason: format!("expected `a,b,m`, got `{s}`"),
        };
        if parts.len() != 3 {
            return Err(bad());
        }
        let nums: Result<Vec<u64>, _> = parts.iter().map(|p| p.parse::<u64>()).collect();
        let nums = nums.map_err(|_| bad())?;
        Weights::new(nums[0], nums[1], nums[2])
    }
}

/// The unique normalized type `(a, b; m)` making `f` weighted homogeneous.
pub fn infer_weights(f: &Poly) -> Result<Weights, PolyError> {
    let support: Vec<(i64, i64)> = f.support().map(|(p, q)| (p as i64, q as i64)).collect();
    let Some(&(p0, q0)) = support.first() else {
        return Err(PolyError::ZeroPolynomial);
    };
    if support.len() == 1 {
        return Err(PolyError::AmbiguousWeights);
    }
    // every difference of support points must be orthogonal to (a, b)
    let (dp, dq) = (support[1].0 - p0, support[1].1 - q0);
    if dp.signum() * dq.signum() >= 0 {
        return Err(PolyError::NotWeightedHomogeneous(format!(
            "monomials x^{p0}*y^{q0} and x^{}*y^{} admit no positive weights",
            support[1].0, support[1].1
        )));
    }
    let g = dp.abs().gcd(&dq.abs());
    let a = dq.abs() / g;
    let b = dp.abs() / g;
    let m = p0 * a + q0 * b;
    if let Some(&(p, q)) = support.iter().find(|&&(p, q)| p * a + q * b != m) {
        return Err(PolyError::NotWeightedHomogeneous(format!(
            "x^{p}*y^{q} has weighted degree {} under ({a},{b};{m})",
            p * a + q * b
        )));
    }
    Weights::new(a as u64, b as u64, m as u64)
}

/// Resolves the type of `f`, honoring an explicit override.
///
/// A single monomial only passes the singularity check when it is `c·x·y`; every
/// type `(a, b; a+b)` fits it and all downstream results coincide, so `(1,1;2)` is
/// used. Other single monomials are rejected by the singularity certificate, which
/// does not depend on the weights.
pub fn resolve_weights(f: &Poly, explicit: Option<Weights>) -> Result<Weights, PolyError> {
    if let Some(w) = explicit {
        if f.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if !f.is_weighted_homogeneous(&w) {
            return Err(PolyError::NotWeightedHomogeneous(format!(
                "{f} is not of type {w}"
            )));
        }
        return Ok(w);
    }
    match infer_weights(f) {
        Err(PolyError::AmbiguousWeights) => {
            validate_isolated_singularity(f)?;
            let ((p, q), _) = f.terms().next().expect("nonzero");
            Weights::new(p as u64, q as u64, (p + q) as u64)
        }
        other => other,
    }
}

/// Weights plus validated singularity: the standing hypotheses of the criterion.
pub fn prepare(f: &Poly, explicit: Option<Weights>) -> Result<Weights, PolyError> {
    let w = resolve_weights(f, explicit)?;
    validate_isolated_singularity(f)?;
    Ok(w)
}

#[cfg(test)]
pub(crate) fn rational(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[cfg(test)]
pub(crate) fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
