//! Higher chain rule for `t ↦ φ(α t^a, t^b u)`.
//!
//! ```text
//! d^N/dt^N φ(α t^a, t^b u) = Σ c_ijk α^i u^j t^k ∂^{i+j}φ/∂x^i∂y^j (α t^a, t^b u)
//! ```
//!
//! summed over `i + j ≤ N`, `k ≥ 0`, `i·a + j·b = N + k`. The coefficients are
//! positive integers depending only on `(a, b)`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

/// Guard for the term-by-term oracle.
pub const ORACLE_MAX_ORDER: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainRuleError {
    #[error("symbolic oracle limited to order {max}, got {n}")]
    OrderTooLarge { n: u32, max: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CijkTable {
    pub a: u32,
    pub b: u32,
    pub n: u32,
    /// `(i, j, k) → c_ijk`, zero entries omitted.
    pub entries: BTreeMap<(u32, u32, u32), BigUint>,
}

impl CijkTable {
    fn order_zero(a: u32, b: u32) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert((0, 0, 0), BigUint::from(1u32));
        Self { a, b, n: 0, entries }
    }

    pub fn get(&self, i: u32, j: u32, k: u32) -> BigUint {
        self.entries.get(&(i, j, k)).cloned().unwrap_or_default()
    }

    /// `c_ij` where `k` is forced to `i·a + j·b - N`.
    pub fn get_ij(&self, i: u32, j: u32) -> BigUint {
        let weight = i * self.a + j * self.b;
        if weight < self.n {
            return BigUint::zero();
        }
        self.get(i, j, weight - self.n)
    }

    /// Next order by the recurrence
    /// `c'_ijk = (k+1) c_ij(k+1) + a c_(i-1)j(k-a+1) + b c_i(j-1)(k-b+1)`.
    fn next(&self) -> Self {
        let n = self.n + 1;
        let (a, b) = (self.a, self.b);
        let mut entries = BTreeMap::new();
        for i in 0..=n {
            for j in 0..=n - i {
                let weight = i * a + j * b;
                if weight < n {
                    continue;
                }
                let k = weight - n;
                let mut c = self.get(i, j, k + 1) * (k + 1);
                if i > 0 && k + 1 >= a {
                    c += self.get(i - 1, j, k + 1 - a) * a;
                }
                if j > 0 && k + 1 >= b {
                    c += self.get(i, j - 1, k + 1 - b) * b;
                }
                if !c.is_zero() {
                    entries.insert((i, j, k), c);
                }
            }
        }
        Self { a, b, n, entries }
    }
}

/// The table for order `n`, built by the recurrence from `c_000 = 1`.
pub fn cijk_table(a: u32, b: u32, n: u32) -> CijkTable {
    ChainRuleLadder::new(a, b, n).level(n).clone()
}

/// All tables of orders `0..=max_order` for one `(a, b)`.
#[derive(Debug, Clone)]
pub struct ChainRuleLadder {
    levels: Vec<CijkTable>,
}

impl ChainRuleLadder {
    pub fn new(a: u32, b: u32, max_order: u32) -> Self {
        let mut levels = vec![CijkTable::order_zero(a, b)];
        for _ in 0..max_order {
            let next = levels.last().expect("nonempty").next();
            levels.push(next);
        }
        Self { levels }
    }

    pub fn max_order(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    /// # Panics
    /// If `n` exceeds the order the ladder was built for.
    pub fn level(&self, n: u32) -> &CijkTable {
        &self.levels[n as usize]
    }
}

/// A term `coef · α^alpha · u^u · t^t · ∂x^dx ∂y^dy φ(α t^a, t^b u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Term {
    alpha: u32,
    u: u32,
    t: i64,
    dx: u32,
    dy: u32,
}

/// The same table by repeated formal differentiation with the product rule.
pub fn symbolic_oracle(a: u32, b: u32, n: u32) -> Result<CijkTable, ChainRuleError> {
    if n > ORACLE_MAX_ORDER {
        return Err(ChainRuleError::OrderTooLarge {
            n,
            max: ORACLE_MAX_ORDER,
        });
    }
    let mut terms: BTreeMap<Term, BigUint> = BTreeMap::new();
    terms.insert(
        Term {
            alpha: 0,
            u: 0,
            t: 0,
            dx: 0,
            dy: 0,
        },
        BigUint::from(1u32),
    );
    for _ in 0..n {
        let mut next: BTreeMap<Term, BigUint> = BTreeMap::new();
        for (term, coef) in &terms {
            // d/dt of t^t
            if term.t != 0 {
                *next
                    .entry(Term {
                        t: term.t - 1,
                        ..*term
                    })
                    .or_default() += coef * BigUint::from(term.t as u64);
            }
            // d/dt of the x-slot α t^a
            *next
                .entry(Term {
                    alpha: term.alpha + 1,
                    t: term.t + a as i64 - 1,
                    dx: term.dx + 1,
                    ..*term
                })
                .or_default() += coef * a;
            // d/dt of the y-slot t^b u
            *next
                .entry(Term {
                    u: term.u + 1,
                    t: term.t + b as i64 - 1,
                    dy: term.dy + 1,
                    ..*term
                })
                .or_default() += coef * b;
        }
        terms = next;
    }
    let entries = terms
        .into_iter()
        .map(|(term, c)| {
            debug_assert!(term.alpha == term.dx && term.u == term.dy && term.t >= 0);
            ((term.dx, term.dy, term.t as u32), c)
        })
        .collect();
    Ok(CijkTable { a, b, n, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::{One, Signed};

    fn table(entries: &[((u32, u32, u32), u32)]) -> BTreeMap<(u32, u32, u32), BigUint> {
        entries.iter().map(|&(key, c)| (key, BigUint::from(c))).collect()
    }

    #[test]
    fn small_tables() {
        assert_eq!(cijk_table(5, 7, 0).entries, table(&[((0, 0, 0), 1)]));
        assert_eq!(
            cijk_table(3, 2, 1).entries,
            table(&[((1, 0, 2), 3), ((0, 1, 1), 2)])
        );
        assert_eq!(
            cijk_table(1, 1, 2).entries,
            table(&[((2, 0, 0), 1), ((1, 1, 0), 2), ((0, 2, 0), 1)])
        );
    }

    #[test]
    fn second_order_with_unequal_weights() {
        // d²/dt² φ(α t², t u) = 2α φ_x + 4α² t² φ_xx + 4 α u t φ_xy + u² φ_yy
        assert_eq!(
            cijk_table(2, 1, 2).entries,
            table(&[((1, 0, 0), 2), ((2, 0, 2), 4), ((1, 1, 1), 4), ((0, 2, 0), 1)])
        );
    }

    #[test]
    fn recurrence_matches_oracle() {
        for a in 1..=4 {
            for b in 1..=4 {
                for n in 0..=8 {
                    assert_eq!(
                        cijk_table(a, b, n),
                        symbolic_oracle(a, b, n).unwrap(),
                        "a={a} b={b} N={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn oracle_guard() {
        assert!(symbolic_oracle(1, 1, 13).is_err());
    }

    /// With `φ = x^P y^Q` the identity reads `(aP + bQ)_N = Σ c_ij (P)_i (Q)_j`,
    /// so `c_ij` is a scaled double forward difference of a falling factorial.
    #[test]
    fn forward_difference_oracle() {
        fn falling(x: i64, n: u32) -> BigInt {
            (0..n as i64).map(|i| BigInt::from(x - i)).product()
        }
        fn factorial(n: u32) -> BigInt {
            (1..=n as i64).map(BigInt::from).product()
        }
        fn binom(n: u32, k: u32) -> BigInt {
            factorial(n) / (factorial(k) * factorial(n - k))
        }
        for (a, b) in [(1, 1), (2, 1), (3, 2), (3, 4), (5, 3)] {
            for n in 0..=7 {
                let t = cijk_table(a, b, n);
                for i in 0..=n {
                    for j in 0..=n - i {
                        let mut diff = BigInt::zero();
                        for p in 0..=i {
                            for q in 0..=j {
                                let sign = if (i - p + j - q) % 2 == 0 { 1 } else { -1 };
                                diff += BigInt::from(sign)
                                    * binom(i, p)
                                    * binom(j, q)
                                    * falling((a * p + b * q) as i64, n);
                            }
                        }
                        let expected = diff / (factorial(i) * factorial(j));
                        assert!(!expected.is_negative());
                        assert_eq!(BigInt::from(t.get_ij(i, j)), expected, "a={a} b={b} N={n} i={i} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn constant_terms_are_multinomial() {
        // at t = 0 only k = 0 survives: d^n/dt^n φ(αt^a, t^b u) = n! [t^n] of its Taylor series
        let fact = |n: u32| (1..=n).map(BigUint::from).product::<BigUint>();
        for (a, b) in [(1, 1), (2, 3), (3, 4), (5, 3)] {
            let ladder = ChainRuleLadder::new(a, b, 10);
            for n in 0..=10 {
                for (&(i, j, k), c) in &ladder.level(n).entries {
                    if k == 0 {
                        assert_eq!(c * fact(i) * fact(j), fact(n), "a={a} b={b} n={n} ({i},{j})");
                    }
                }
            }
        }
    }

    #[test]
    fn ladder_levels_agree_with_single_tables() {
        let ladder = ChainRuleLadder::new(3, 2, 6);
        assert_eq!(ladder.max_order(), 6);
        for n in 0..=6 {
            assert_eq!(ladder.level(n), &cijk_table(3, 2, n));
        }
        assert!(ladder.level(0).get(0, 0, 0).is_one());
    }
}
