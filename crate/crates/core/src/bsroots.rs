//! Bernstein–Sato roots of a weighted homogeneous isolated singularity.
//!
//! The roots in `(-1, 0)` depend only on the weights: `-d/m` with `d < m` a
//! positive combination `j'a + k'b`. The full root set comes from the graded
//! pieces of the Milnor algebra `ℚ[x,y]/(f_x, f_y)`: degree `t` contributes
//! `-(t + a + b)/m` whenever its piece is nonzero.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::criterion::{PoleStatus, PoleVerdict};
use crate::poly::{Poly, Weights};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BsRootsError {
    #[error("Milnor algebra of {f} is nonzero in degree {t}, past the socle degree {bound}")]
    MilnorAlgebraUnbounded { f: String, t: u64, bound: u64 },
}

/// A root `s₀ = -d/m ∈ (-1, 0)` and every way of writing `d = (j+1)a + (k+1)b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateRoot {
    pub d: u64,
    #[serde(with = "crate::rational_serde")]
    pub s0: Rational,
    /// `(j, k)` pairs, sorted.
    pub representations: Vec<(u32, u32)>,
}

/// All `(j, k) ∈ ℕ²` with `(j+1)a + (k+1)b = d`.
pub fn representations(w: &Weights, d: u64) -> Vec<(u32, u32)> {
    let mut reps = Vec::new();
    let mut ja = w.a;
    while ja + w.b <= d {
        let rest = d - ja;
        if rest % w.b == 0 {
            reps.push(((ja / w.a - 1) as u32, (rest / w.b - 1) as u32));
        }
        ja += w.a;
    }
    reps
}

/// Roots of `b_f` in `(-1, 0)`, sorted by `d` (so by decreasing `s₀`).
pub fn window_roots(w: &Weights) -> Vec<CandidateRoot> {
    (w.a + w.b..w.m)
        .filter_map(|d| {
            let representations = representations(w, d);
            (!representations.is_empty()).then(|| CandidateRoot {
                d,
                s0: -Rational::new(BigInt::from(d), BigInt::from(w.m)),
                representations,
            })
        })
        .collect()
}

/// Monomials `(p, q)` of weighted degree `t`.
fn monomials_of_degree(w: &Weights, t: u64) -> Vec<(u32, u32)> {
    (0..=t / w.a)
        .filter_map(|p| {
            let rest = t - p * w.a;
            (rest % w.b == 0).then_some((p as u32, (rest / w.b) as u32))
        })
        .collect()
}

/// `dim_ℚ [ℚ[x,y]/(f_x, f_y)]_t` by exact rank.
pub fn milnor_graded_dim(f: &Poly, w: &Weights, t: u64) -> usize {
    let columns = monomials_of_degree(w, t);
    if columns.is_empty() {
        return 0;
    }
    let index: BTreeMap<(u32, u32), usize> =
        columns.iter().enumerate().map(|(i, &m)| (m, i)).collect();

    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for (partial, shift) in [(f.diff_x(), w.m - w.a), (f.diff_y(), w.m - w.b)] {
        if partial.is_zero() || shift > t {
            continue;
        }
        for (p, q) in monomials_of_degree(w, t - shift) {
            let mut row = vec![Rational::zero(); columns.len()];
            for ((pp, qq), c) in partial.terms() {
                row[index[&(pp + p, qq + q)]] += c;
            }
            rows.push(clear_denominators(&row));
        }
    }
    columns.len() - integer_rank(rows)
}

fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    row.iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect()
}

/// Fraction-free (Bareiss) rank over ℤ.
fn integer_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        for r in rank + 1..rows.len() {
            for c in col + 1..ncols {
                let v = &rows[rank][col] * &rows[r][c] - &rows[r][col] * &rows[rank][c];
                rows[r][c] = v / &prev;
            }
            rows[r][col] = BigInt::zero();
        }
        prev = rows[rank][col].abs();
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Top weighted degree of the Milnor algebra: `2(m - a - b)`.
pub fn socle_degree(w: &Weights) -> Option<u64> {
    let excess = w.excess();
    (excess >= 0).then_some(2 * excess as u64)
}

/// `{-1} ∪ {-(t+a+b)/m : [Milnor algebra]_t ≠ 0}`, sorted ascending.
pub fn full_bs_roots(f: &Poly, w: &Weights) -> Result<Vec<Rational>, BsRootsError> {
    let mut roots = vec![-Rational::one()];
    let Some(bound) = socle_degree(w) else {
        // m < a + b: the Jacobian ideal contains 1
        return Ok(roots);
    };
    for t in 0..=bound {
        if milnor_graded_dim(f, w, t) > 0 {
            roots.push(-Rational::new(BigInt::from(t + w.a + w.b), BigInt::from(w.m)));
        }
    }
    // zero on a window of width max(a,b) past the bound ⇒ zero in all higher degrees
    for t in bound + 1..=bound + w.a.max(w.b) {
        if milnor_graded_dim(f, w, t) > 0 {
            return Err(BsRootsError::MilnorAlgebraUnbounded {
                f: f.to_string(),
                t,
                bound,
            });
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

/// Sum of all graded dimensions up to the socle degree.
pub fn milnor_number(f: &Poly, w: &Weights) -> usize {
    socle_degree(w).map_or(0, |bound| (0..=bound).map(|t| milnor_graded_dim(f, w, t)).sum())
}

/// How a monodromy eigenvalue class relates to the `(-1, 0)` window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenCase {
    /// The largest root of the class lies in the window and is a pole.
    RootIsPole,
    /// The largest root lies in the window but is not a pole; the largest pole is below -1.
    RootNotPole,
    /// The class has no root in the window; not decidable here.
    BelowWindow,
    /// The window root's verdict is indeterminate.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenClass {
    /// `θ ∈ [0, 1)` with eigenvalue `e^{2πiθ}`.
    #[serde(with = "crate::rational_serde")]
    pub theta: Rational,
    /// Largest root of `b_f` in the class.
    #[serde(with = "crate::rational_serde")]
    pub alpha1: Rational,
    pub in_window: bool,
    pub pole: Option<bool>,
    pub case: EigenCase,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EigenvalueReport {
    pub classes: Vec<EigenClass>,
}

fn frac(q: &Rational) -> Rational {
    q - q.floor()
}

/// Groups roots by `s₀ mod 1` and compares the largest root of each class with its verdict.
///
/// The class of `1` (integer roots) is skipped. Classes whose roots all lie below `-1`
/// are listed for completeness but cannot be decided.
pub fn eigenvalue_report(
    full_roots: &[Rational],
    verdicts: &[PoleVerdict],
) -> EigenvalueReport {
    let mut classes: BTreeMap<Rational, Rational> = BTreeMap::new();
    for r in full_roots
        .iter()
        .chain(verdicts.iter().map(|v| &v.root.s0))
    {
        let theta = frac(r);
        if theta.is_zero() {
            continue;
        }
        classes
            .entry(theta)
            .and_modify(|best| {
                if r > best {
                    *best = r.clone();
                }
            })
            .or_insert_with(|| r.clone());
    }
    let classes = classes
        .into_iter()
        .map(|(theta, alpha1)| {
            let verdict = verdicts.iter().find(|v| v.root.s0 == alpha1);
            let (pole, case, note) = match verdict.map(|v| v.status) {
                Some(PoleStatus::Pole) => (Some(true), EigenCase::RootIsPole, "alpha2 = alpha1".to_string()),
                Some(PoleStatus::NotPoleSymmetry) | Some(PoleStatus::NotPoleNumeric) => (
                    Some(false),
                    EigenCase::RootNotPole,
                    "alpha2 < -1: unknown below window".to_string(),
                ),
                Some(PoleStatus::Indeterminate) => {
                    (None, EigenCase::Undetermined, "verdict indeterminate".to_string())
                }
                None => (
                    None,
                    EigenCase::BelowWindow,
                    "alpha1 < -1: undecidable here".to_string(),
                ),
            };
            EigenClass {
                theta,
                in_window: verdict.is_some(),
                alpha1,
                pole,
                case,
                note,
            }
        })
        .collect();
    EigenvalueReport { classes }
}
