//! Pole decision for a candidate root `s₀ = -d/m`.
//!
//! `s₀` is a pole iff `I(j, k) ≠ 0` for some representation `d = (j+1)a + (k+1)b`.
//! Each representation is settled by, in order: an exact parity rule, the
//! positivity shortcut (`j`, `k` both even), or quadrature with a zero threshold.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bsroots::CandidateRoot;
use crate::poly::{Poly, Weights};
use crate::quadrature::{convergence_precheck, singular_integral, IntegralResult, QuadratureError, Tolerances};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CriterionError {
    #[error("precheck failed for (j,k)=({j},{k}): {source}")]
    Precheck {
        j: u32,
        k: u32,
        #[source]
        source: QuadratureError,
    },
}

/// Parity flags read off the support of `f`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryClass {
    pub even_x: bool,
    pub odd_x: bool,
    pub even_y: bool,
    pub odd_y: bool,
    pub even_xy: bool,
    pub odd_xy: bool,
}

impl SymmetryClass {
    /// `|f(-x, y)| = |f(x, y)|`.
    pub fn x_parity(&self) -> bool {
        self.even_x || self.odd_x
    }

    pub fn y_parity(&self) -> bool {
        self.even_y || self.odd_y
    }

    pub fn xy_parity(&self) -> bool {
        self.even_xy || self.odd_xy
    }

    pub fn labels(&self) -> Vec<&'static str> {
        [
            (self.even_x, "even_x"),
            (self.odd_x, "odd_x"),
            (self.even_y, "even_y"),
            (self.odd_y, "odd_y"),
            (self.even_xy, "even_xy"),
            (self.odd_xy, "odd_xy"),
        ]
        .into_iter()
        .filter_map(|(on, name)| on.then_some(name))
        .collect()
    }
}

pub fn symmetry_class(f: &Poly) -> SymmetryClass {
    if f.is_zero() {
        return SymmetryClass::default();
    }
    let all = |pred: &dyn Fn(u32, u32) -> bool| f.support().all(|(p, q)| pred(p, q));
    SymmetryClass {
        even_x: all(&|p, _| p % 2 == 0),
        odd_x: all(&|p, _| p % 2 == 1),
        even_y: all(&|_, q| q % 2 == 0),
        odd_y: all(&|_, q| q % 2 == 1),
        even_xy: all(&|p, q| (p + q) % 2 == 0),
        odd_xy: all(&|p, q| (p + q) % 2 == 1),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymmetryRule {
    /// `x`-parity with `j` odd: `|f(1,u)| = |f(-1,u)|` cancels.
    XParityOddJ,
    /// `y`-parity with `k` odd: the integrand is odd in `u`.
    YParityOddK,
    /// `xy`-parity with `j + k` odd: `u ↦ -u` swaps the two restrictions.
    XyParityOddJk,
}

/// The first parity rule forcing `I(j, k) = 0`, if any.
pub fn vanishing_rule(sym: &SymmetryClass, j: u32, k: u32) -> Option<SymmetryRule> {
    if sym.x_parity() && j % 2 == 1 {
        Some(SymmetryRule::XParityOddJ)
    } else if sym.y_parity() && k % 2 == 1 {
        Some(SymmetryRule::YParityOddK)
    } else if sym.xy_parity() && (j + k) % 2 == 1 {
        Some(SymmetryRule::XyParityOddJk)
    } else {
        None
    }
}

pub fn vanishes_by_symmetry(sym: &SymmetryClass, j: u32, k: u32) -> bool {
    vanishing_rule(sym, j, k).is_some()
}

/// For `j`, `k` even the integrand is a sum of nonnegative terms, positive off a finite set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonZeroCertificate {
    pub j: u32,
    pub k: u32,
}

pub fn positivity_shortcut(_f: &Poly, _sym: &SymmetryClass, j: u32, k: u32) -> Option<NonZeroCertificate> {
    (j % 2 == 0 && k % 2 == 0).then_some(NonZeroCertificate { j, k })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NumericClass {
    Zero,
    NonZero,
    Gray,
}

/// How one representation was settled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    Symmetry { rule: SymmetryRule },
    Positivity,
    Numeric {
        class: NumericClass,
        threshold: f64,
        integral: IntegralResult,
    },
    QuadratureFailure { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationEvidence {
    pub j: u32,
    pub k: u32,
    #[serde(flatten)]
    pub evidence: Evidence,
}

impl RepresentationEvidence {
    fn is_nonzero(&self) -> bool {
        matches!(
            self.evidence,
            Evidence::Positivity
                | Evidence::Numeric {
                    class: NumericClass::NonZero,
                    ..
                }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PoleStatus {
    Pole,
    NotPoleSymmetry,
    NotPoleNumeric,
    Indeterminate,
}

impl PoleStatus {
    pub fn is_pole(self) -> Option<bool> {
        match self {
            PoleStatus::Pole => Some(true),
            PoleStatus::NotPoleSymmetry | PoleStatus::NotPoleNumeric => Some(false),
            PoleStatus::Indeterminate => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleVerdict {
    pub root: CandidateRoot,
    pub status: PoleStatus,
    /// One entry per representation, sorted by `(j, k)`.
    pub evidence: Vec<RepresentationEvidence>,
}

/// `max(zero_abs, zero_rel × mass)`.
pub fn zero_threshold(tol: &Tolerances, l1_mass: f64) -> f64 {
    tol.zero_abs.max(tol.zero_rel * l1_mass)
}

/// Values below the threshold are zero, above ten times it nonzero; the band between is gray.
pub fn classify_value(value: f64, threshold: f64) -> NumericClass {
    let v = value.abs();
    if v < threshold {
        NumericClass::Zero
    } else if v > 10.0 * threshold {
        NumericClass::NonZero
    } else {
        NumericClass::Gray
    }
}

pub fn classify_representation(
    f: &Poly,
    w: &Weights,
    sym: &SymmetryClass,
    root: &CandidateRoot,
    j: u32,
    k: u32,
    tol: &Tolerances,
) -> Result<RepresentationEvidence, CriterionError> {
    convergence_precheck(f, w, &root.s0, k).map_err(|source| CriterionError::Precheck { j, k, source })?;
    let evidence = if let Some(rule) = vanishing_rule(sym, j, k) {
        Evidence::Symmetry { rule }
    } else if positivity_shortcut(f, sym, j, k).is_some() {
        Evidence::Positivity
    } else {
        match singular_integral(f, &root.s0, j, k, tol) {
            Ok(integral) => {
                let threshold = zero_threshold(tol, integral.l1_mass);
                Evidence::Numeric {
                    class: classify_value(integral.value, threshold),
                    threshold,
                    integral,
                }
            }
            Err(err) => Evidence::QuadratureFailure {
                reason: err.to_string(),
            },
        }
    };
    Ok(RepresentationEvidence { j, k, evidence })
}

/// Combines per-representation evidence into a status.
pub fn combine(evidence: &[RepresentationEvidence]) -> PoleStatus {
    if evidence.iter().any(RepresentationEvidence::is_nonzero) {
        return PoleStatus::Pole;
    }
    let non_symmetric: Vec<_> = evidence
        .iter()
        .filter(|e| !matches!(e.evidence, Evidence::Symmetry { .. }))
        .collect();
    if non_symmetric.is_empty() {
        PoleStatus::NotPoleSymmetry
    } else if non_symmetric.iter().all(|e| {
        matches!(
            e.evidence,
            Evidence::Numeric {
                class: NumericClass::Zero,
                ..
            }
        )
    }) {
        PoleStatus::NotPoleNumeric
    } else {
        PoleStatus::Indeterminate
    }
}

/// Settles every representation of `root`.
pub fn classify_root(f: &Poly, w: &Weights, root: &CandidateRoot, tol: &Tolerances) -> Result<PoleVerdict, CriterionError> {
    let sym = symmetry_class(f);
    let mut reps = root.representations.clone();
    reps.sort_unstable();
    let evidence = reps
        .iter()
        .map(|&(j, k)| classify_representation(f, w, &sym, root, j, k, tol))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PoleVerdict {
        root: root.clone(),
        status: combine(&evidence),
        evidence,
    })
}
