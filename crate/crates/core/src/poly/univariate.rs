//! Dense univariate polynomials over ℚ with Sturm-sequence root isolation.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::PolyError;
use crate::Rational;

/// Ascending coefficients; trailing zeros are stripped so the leading coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(vec![Rational::one()])
    }

    /// `u - r`
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![-r.clone(), Rational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() == 1
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> i8 {
        sign_of(&self.eval(x))
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(crate::to_f64).collect()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().expect("nonzero").clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (i, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// No repeated factor over ℂ: `gcd(g, g')` is constant.
    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// `g / gcd(g, g')`, same roots, all simple.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0
    }

    /// Coefficients of `τ ↦ g(r + τ)`.
    pub fn taylor_shift(&self, r: &Rational) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        // repeated synthetic division by (u - r)
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &c[j + 1] * r;
                c[j] += t;
            }
        }
        Self::new(c)
    }

    /// Signed remainder sequence `g, g', -rem(g, g'), …`.
    pub fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.clone()];
        if self.degree().unwrap_or(0) == 0 {
            return seq;
        }
        seq.push(self.derivative());
        loop {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            if r.is_zero() {
                return seq;
            }
            seq.push(r.scale(&-Rational::one()));
        }
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        let seq = self.squarefree_part().sturm_sequence();
        let at = |s: i8| {
            variations(seq.iter().map(|p| match (p.leading(), p.degree()) {
                (Some(l), Some(d)) => {
                    let sl = sign_of(l);
                    if s < 0 && d % 2 == 1 {
                        -sl
                    } else {
                        sl
                    }
                }
                _ => 0,
            }))
        };
        at(-1) - at(1)
    }

    /// Cauchy bound: every complex root has modulus strictly below it.
    pub fn root_bound(&self) -> Rational {
        let lead = self.leading().expect("nonzero").abs();
        let max = self
            .coeffs
            .iter()
            .rev()
            .skip(1)
            .map(|c| c.abs() / &lead)
            .fold(Rational::zero(), |a, b| if b > a { b } else { a });
        max + Rational::one()
    }

    /// Disjoint, sorted isolating intervals of width at most `width`, one per real root.
    ///
    /// Rational roots are detected and returned as degenerate exact intervals.
    pub fn isolate_real_roots(&self, width: &Rational) -> Result<Vec<RootInterval>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        if self.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let g = self.squarefree_part();
        let sturm = SturmCounter::new(&g);
        let bound = g.root_bound();
        let two = Rational::from_integer(BigInt::from(2));

        // (lo, hi] intervals holding more than one root get bisected
        let mut pending = vec![(-bound.clone(), bound.clone())];
        let mut isolated: Vec<RootInterval> = Vec::new();
        while let Some((lo, hi)) = pending.pop() {
            let n = sturm.count(&lo, &hi);
            if n == 0 {
                continue;
            }
            if n == 1 {
                isolated.push(refine(&g, &sturm, lo, hi, width));
                continue;
            }
            // a root sitting exactly at mid is counted in (lo, mid] and found by refine
            let mid = (&lo + &hi) / &two;
            pending.push((lo, mid.clone()));
            pending.push((mid, hi));
        }
        isolated.sort_by(|a, b| a.lo.cmp(&b.lo));
        Ok(isolated)
    }
}

fn sign_of(q: &Rational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

struct SturmCounter {
    seq: Vec<UniPoly>,
}

impl SturmCounter {
    fn new(g: &UniPoly) -> Self {
        Self {
            seq: g.sturm_sequence(),
        }
    }

    fn variations_at(&self, x: &Rational) -> usize {
        variations(self.seq.iter().map(|p| p.sign_at(x)))
    }

    /// Distinct roots in `(lo, hi]`; valid for squarefree input even when `lo` or `hi` is a root.
    fn count(&self, lo: &Rational, hi: &Rational) -> usize {
        self.variations_at(lo) - self.variations_at(hi)
    }
}

fn refine(
    g: &UniPoly,
    sturm: &SturmCounter,
    mut lo: Rational,
    mut hi: Rational,
    width: &Rational,
) -> RootInterval {
    let two = Rational::from_integer(BigInt::from(2));
    if g.sign_at(&hi) == 0 {
        return RootInterval::exact(hi);
    }
    while &hi - &lo > *width {
        let mid = (&lo + &hi) / &two;
        if g.sign_at(&mid) == 0 {
            return RootInterval::exact(mid);
        }
        if sturm.count(&lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let q = simplest_between(&lo, &hi);
    if g.sign_at(&q) == 0 {
        return RootInterval::exact(q);
    }
    RootInterval {
        lo,
        hi,
        exact: false,
    }
}

/// The rational with the smallest denominator in `[lo, hi]`.
pub(crate) fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    if hi.is_negative() {
        return -simplest_between(&-hi.clone(), &-lo.clone());
    }
    if !lo.is_positive() {
        return Rational::zero();
    }
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = &fl + Rational::one();
    if &next <= hi {
        return next;
    }
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*u"),
                _ => format!("{c}*u^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPoly({self})")
    }
}

/// An isolating interval for one real root; `lo == hi` when the root is rational.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootInterval {
    #[serde(with = "crate::rational_serde")]
    pub lo: Rational,
    #[serde(with = "crate::rational_serde")]
    pub hi: Rational,
    pub exact: bool,
}

impl RootInterval {
    fn exact(r: Rational) -> Self {
        Self {
            lo: r.clone(),
            hi: r,
            exact: true,
        }
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rational};

    fn w() -> Rational {
        rational(1, 1024)
    }

    #[test]
    fn cube_plus_one_has_the_exact_root_minus_one() {
        let roots = UniPoly::from_ints(&[1, 0, 0, 1]).isolate_real_roots(&w()).unwrap();
        assert_eq!(roots.len(), 1);
        assert!(roots[0].exact);
        assert_eq!(roots[0].lo, int(-1));
    }

    #[test]
    fn no_real_roots() {
        let roots = UniPoly::from_ints(&[1, 0, 1]).isolate_real_roots(&w()).unwrap();
        assert!(roots.is_empty());
        assert_eq!(UniPoly::from_ints(&[5]).isolate_real_roots(&w()).unwrap(), vec![]);
        assert_eq!(
            UniPoly::zero().isolate_real_roots(&w()),
            Err(PolyError::ZeroPolynomial)
        );
    }

    #[test]
    fn three_irrational_roots_bracket_sign_changes() {
        let g = UniPoly::from_ints(&[1, -3, 0, 1]);
        let roots = g.isolate_real_roots(&w()).unwrap();
        assert_eq!(roots.len(), 3);
        assert_eq!(g.count_real_roots(), 3);
        for r in &roots {
            assert!(!r.exact);
            assert!(r.width() <= w());
            assert_eq!(g.sign_at(&r.lo) * g.sign_at(&r.hi), -1);
        }
        for pair in roots.windows(2) {
            assert!(pair[0].hi < pair[1].lo);
        }
        // dense sampling sees the same three sign changes
        let coeffs = g.to_f64_coeffs();
        let eval = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
        let changes = (0..4000)
            .map(|i| -4.0 + i as f64 * 0.002)
            .collect::<Vec<_>>()
            .windows(2)
            .filter(|p| eval(p[0]).signum() != eval(p[1]).signum())
            .count();
        assert_eq!(changes, 3);
    }

    #[test]
    fn rational_roots_off_the_dyadic_grid() {
        // (3u - 1)(u + 2/5)(u^2 + 1)
        let g = UniPoly::from_ints(&[-1, 3])
            .mul(&UniPoly::new(vec![rational(2, 5), int(1)]))
            .mul(&UniPoly::from_ints(&[1, 0, 1]));
        let roots = g.isolate_real_roots(&rational(1, 1 << 20)).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|r| r.exact));
        assert_eq!(roots[0].lo, rational(-2, 5));
        assert_eq!(roots[1].lo, rational(1, 3));
    }

    #[test]
    fn root_at_bisection_midpoint() {
        // roots -1, 0, 1: zero is the first midpoint
        let g = UniPoly::from_ints(&[0, -1, 0, 1]);
        let roots = g.isolate_real_roots(&w()).unwrap();
        let values: Vec<_> = roots.iter().map(|r| r.lo.clone()).collect();
        assert_eq!(values, vec![int(-1), int(0), int(1)]);
    }

    #[test]
    fn squarefree_detection() {
        assert!(UniPoly::from_ints(&[1, 0, 0, 1]).is_squarefree());
        assert!(!UniPoly::from_ints(&[1, -2, 1]).is_squarefree());
        // (u^2+1)^2 is not squarefree over the complex numbers
        assert!(!UniPoly::from_ints(&[1, 0, 2, 0, 1]).is_squarefree());
        assert_eq!(
            UniPoly::from_ints(&[0, 1, -2, 1]).squarefree_part().monic(),
            UniPoly::from_ints(&[0, -1, 1])
        );
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let g = UniPoly::from_ints(&[1, -3, 0, 1]);
        let r = rational(3, 7);
        let shifted = g.taylor_shift(&r);
        for t in [int(0), rational(1, 2), int(-2)] {
            assert_eq!(shifted.eval(&t), g.eval(&(&r + &t)));
        }
    }

    #[test]
    fn division_identity() {
        let a = UniPoly::from_ints(&[3, 0, -2, 5, 1]);
        let b = UniPoly::from_ints(&[1, 2]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 1);
    }

    #[test]
    fn simplest_rationals() {
        assert_eq!(simplest_between(&rational(3, 10), &rational(2, 5)), rational(1, 3));
        assert_eq!(simplest_between(&rational(-7, 5), &rational(-6, 5)), rational(-4, 3));
        assert_eq!(simplest_between(&rational(-6, 5), &rational(-4, 5)), int(-1));
        assert_eq!(simplest_between(&rational(-1, 2), &rational(1, 2)), int(0));
    }
}
