//! Parametric sweeps over the classical two-parameter families.
//!
//! | name      | member          |
//! |-----------|-----------------|
//! | `xn+ym`   | `x^n + y^m`     |
//! | `xm+xyn`  | `x^m + x y^n`   |
//! | `xny+xym` | `x^n y + x y^m` |
//!
//! Members are analyzed concurrently; rows come back sorted by `(n, m, d)`.

use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criterion::{PoleStatus, PoleVerdict};
use crate::poly::{prepare, Poly, Weights};
use crate::quadrature::Tolerances;
use crate::report::{classify_window, csv_string, evidence_summary, representations_label, status_label};
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `x^n + y^m`.
    #[serde(rename = "xn+ym")]
    Fermat,
    /// `x^m + x y^n`.
    #[serde(rename = "xm+xyn")]
    XmXyn,
    /// `x^n y + x y^m`.
    #[serde(rename = "xny+xym")]
    XnyXym,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Fermat, Family::XmXyn, Family::XnyXym];

    pub fn name(self) -> &'static str {
        match self {
            Family::Fermat => "xn+ym",
            Family::XmXyn => "xm+xyn",
            Family::XnyXym => "xny+xym",
        }
    }

    pub fn member(self, n: u32, m: u32) -> Poly {
        match self {
            Family::Fermat => Poly::from_int_terms(&[(1, n, 0), (1, 0, m)]),
            Family::XmXyn => Poly::from_int_terms(&[(1, m, 0), (1, 1, n)]),
            Family::XnyXym => Poly::from_int_terms(&[(1, n, 1), (1, 1, m)]),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let key: String = s.chars().filter(|c| !c.is_whitespace() && *c != '^' && *c != '*').collect();
        match key.to_ascii_lowercase().as_str() {
            "xn+ym" | "fermat" => Ok(Family::Fermat),
            "xm+xyn" => Ok(Family::XmXyn),
            "xny+xym" => Ok(Family::XnyXym),
            _ => Err(Error::InvalidArgument(format!(
                "unknown family `{s}` (expected one of xn+ym, xm+xyn, xny+xym)"
            ))),
        }
    }
}

/// Inclusive ranges for `n` and `m`: `"lo..hi"` for both, or `"lo..hi,lo..hi"` for `n` then `m`.
/// A bare number is a one-point range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeSpec {
    pub n: RangeInclusive<u32>,
    pub m: RangeInclusive<u32>,
}

fn parse_range(text: &str) -> Result<RangeInclusive<u32>, Error> {
    let bad = || Error::InvalidArgument(format!("bad range `{text}` (expected `lo..hi` or a number)"));
    let text = text.trim();
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (lo, hi.strip_prefix('=').unwrap_or(hi)),
        None => (text, text),
    };
    let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
    if lo == 0 || lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

impl FromStr for RangeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.split_once(',') {
            Some((n, m)) => Ok(Self {
                n: parse_range(n)?,
                m: parse_range(m)?,
            }),
            None => {
                let r = parse_range(s)?;
                Ok(Self { n: r.clone(), m: r })
            }
        }
    }
}

impl RangeSpec {
    pub fn pairs(&self) -> Vec<(u32, u32)> {
        self.n.clone().flat_map(|n| self.m.clone().map(move |m| (n, m))).collect()
    }
}

/// One verdict per `(family, n, m, root)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub family: String,
    pub n: u32,
    pub m: u32,
    pub polynomial: String,
    pub weights: String,
    pub d: u64,
    pub s0: String,
    pub status: String,
    pub representations: String,
    pub evidence: String,
}

/// A member that failed validation or analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedMember {
    pub n: u32,
    pub m: u32,
    pub polynomial: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberResult {
    pub n: u32,
    pub m: u32,
    pub polynomial: Poly,
    pub weights: Weights,
    pub verdicts: Vec<PoleVerdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilySweep {
    pub family: Family,
    pub members: Vec<MemberResult>,
    pub skipped: Vec<SkippedMember>,
}

fn analyze_member(f: &Poly, tol: &Tolerances) -> Result<(Weights, Vec<PoleVerdict>), Error> {
    let w = prepare(f, None)?;
    Ok((w, classify_window(f, &w, tol)?))
}

pub fn sweep(family: Family, range: &RangeSpec, tol: &Tolerances) -> Result<FamilySweep, Error> {
    tol.validate().map_err(Error::InvalidArgument)?;
    let outcomes: Vec<_> = range
        .pairs()
        .into_par_iter()
        .map(|(n, m)| {
            let f = family.member(n, m);
            let outcome = analyze_member(&f, tol);
            (n, m, f, outcome)
        })
        .collect();
    let mut members = Vec::new();
    let mut skipped = Vec::new();
    for (n, m, f, outcome) in outcomes {
        match outcome {
            Ok((weights, verdicts)) => members.push(MemberResult {
                n,
                m,
                polynomial: f,
                weights,
                verdicts,
            }),
            Err(e) => skipped.push(SkippedMember {
                n,
                m,
                polynomial: f.to_string(),
                reason: e.to_string(),
            }),
        }
    }
    Ok(FamilySweep {
        family,
        members,
        skipped,
    })
}

impl FamilySweep {
    pub fn rows(&self) -> Vec<FamilyRow> {
        self.members
            .iter()
            .flat_map(|mr| {
                mr.verdicts.iter().map(move |v| FamilyRow {
                    family: self.family.name().to_string(),
                    n: mr.n,
                    m: mr.m,
                    polynomial: mr.polynomial.to_string(),
                    weights: mr.weights.to_string(),
                    d: v.root.d,
                    s0: v.root.s0.to_string(),
                    status: status_label(v.status).to_string(),
                    representations: representations_label(&v.root.representations),
                    evidence: evidence_summary(v),
                })
            })
            .collect()
    }

    pub fn has_indeterminate(&self) -> bool {
        self.members
            .iter()
            .flat_map(|m| &m.verdicts)
            .any(|v| v.status == PoleStatus::Indeterminate)
    }

    pub fn to_json(&self) -> String {
        crate::report::json_string(self)
    }

    pub fn to_csv(&self) -> Result<String, Error> {
        csv_string(&self.rows())
    }

    pub fn to_text(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(out, "family {}", self.family);
        for mr in &self.members {
            let _ = writeln!(out, "n = {}, m = {}: {}    type {}", mr.n, mr.m, mr.polynomial, mr.weights);
            if mr.verdicts.is_empty() {
                let _ = writeln!(out, "  (no window roots)");
            }
            for v in &mr.verdicts {
                let _ = writeln!(out, "  s0 = {:<8} d = {:<4} {:<16} {}", v.root.s0.to_string(), v.root.d, status_label(v.status), evidence_summary(v));
            }
        }
        for s in &self.skipped {
            let _ = writeln!(out, "skipped n = {}, m = {} ({}): {}", s.n, s.m, s.polynomial, s.reason);
        }
        out
    }
}
