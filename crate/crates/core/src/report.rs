//! End-to-end analysis and its JSON, CSV and text renderings.
//!
//! Every report type echoes its input and carries [`ToolInfo`], so a JSON file is
//! self-describing. Field order is fixed by the struct definitions and collections
//! are built in sorted order, so identical inputs give byte-identical JSON.

use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bsroots::{eigenvalue_report, full_bs_roots, milnor_number, representations, window_roots, CandidateRoot, EigenvalueReport};
use crate::criterion::{
    classify_root, classify_value, symmetry_class, vanishing_rule, zero_threshold, Evidence, NumericClass, PoleStatus,
    PoleVerdict, SymmetryClass, SymmetryRule,
};
use crate::poly::{prepare, Poly, Weights};
use crate::quadrature::{restriction_degree, singular_integral, IntegralResult, Tolerances};
use crate::zeta::{bump_phi, residue_closed_form, residue_fit_samples, FitSamples, FIT_TOL};
use crate::{Error, Rational};

pub const TOOL_NAME: &str = "bspole";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl ToolInfo {
    pub fn current() -> Self {
        Self {
            name: TOOL_NAME.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightsSource {
    Inferred,
    Explicit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub polynomial: Poly,
    pub weights: Weights,
    pub weights_source: WeightsSource,
}

impl InputEcho {
    /// Resolves the weights and certifies the isolated singularity.
    pub fn prepare(f: &Poly, explicit: Option<Weights>) -> Result<Self, Error> {
        let weights = prepare(f, explicit)?;
        Ok(Self {
            polynomial: f.clone(),
            weights,
            weights_source: if explicit.is_some() {
                WeightsSource::Explicit
            } else {
                WeightsSource::Inferred
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationSummary {
    pub isolated_singularity: bool,
    pub symmetry: SymmetryClass,
    /// `D = max deg_u f(±1, u)`.
    pub restriction_degree: usize,
    pub m_minus_b_d: i64,
    /// `m - b·D ∈ {0, a}`.
    pub structural_invariant: bool,
}

impl ValidationSummary {
    pub fn of(f: &Poly, w: &Weights) -> Self {
        let d = restriction_degree(f);
        let gap = w.m as i64 - (w.b * d as u64) as i64;
        Self {
            isolated_singularity: true,
            symmetry: symmetry_class(f),
            restriction_degree: d,
            m_minus_b_d: gap,
            structural_invariant: gap == 0 || gap == w.a as i64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub input: InputEcho,
    pub validation: ValidationSummary,
    pub tolerances: Tolerances,
    pub window_roots: Vec<PoleVerdict>,
    #[serde(with = "crate::rational_serde::vec")]
    pub full_roots: Vec<Rational>,
    pub milnor_number: usize,
    pub eigenvalues: EigenvalueReport,
}

fn check_tolerances(tol: &Tolerances) -> Result<(), Error> {
    tol.validate().map_err(Error::InvalidArgument)
}

/// Verdicts for every window root, classified concurrently and returned sorted by `d`.
pub fn classify_window(f: &Poly, w: &Weights, tol: &Tolerances) -> Result<Vec<PoleVerdict>, Error> {
    let roots = window_roots(w);
    let verdicts = roots
        .par_iter()
        .map(|r| classify_root(f, w, r, tol))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(verdicts)
}

/// Validation, window verdicts, full root list and eigenvalue report.
pub fn analyze(f: &Poly, explicit: Option<Weights>, tol: &Tolerances) -> Result<Report, Error> {
    check_tolerances(tol)?;
    let input = InputEcho::prepare(f, explicit)?;
    let w = input.weights;
    let validation = ValidationSummary::of(f, &w);
    let verdicts = classify_window(f, &w, tol)?;
    let full_roots = full_bs_roots(f, &w)?;
    let eigenvalues = eigenvalue_report(&full_roots, &verdicts);
    Ok(Report {
        tool: ToolInfo::current(),
        input,
        validation,
        tolerances: tol.clone(),
        window_roots: verdicts,
        milnor_number: milnor_number(f, &w),
        full_roots,
        eigenvalues,
    })
}

pub fn status_label(status: PoleStatus) -> &'static str {
    match status {
        PoleStatus::Pole => "Pole",
        PoleStatus::NotPoleSymmetry => "NotPoleSymmetry",
        PoleStatus::NotPoleNumeric => "NotPoleNumeric",
        PoleStatus::Indeterminate => "Indeterminate",
    }
}

fn rule_label(rule: SymmetryRule) -> &'static str {
    match rule {
        SymmetryRule::XParityOddJ => "x_parity_odd_j",
        SymmetryRule::YParityOddK => "y_parity_odd_k",
        SymmetryRule::XyParityOddJk => "xy_parity_odd_jk",
    }
}

fn class_label(class: NumericClass) -> &'static str {
    match class {
        NumericClass::Zero => "zero",
        NumericClass::NonZero => "nonzero",
        NumericClass::Gray => "gray",
    }
}

/// `"(j,k):how"` per representation, `;`-separated.
pub fn evidence_summary(v: &PoleVerdict) -> String {
    v.evidence
        .iter()
        .map(|e| {
            let how = match &e.evidence {
                Evidence::Symmetry { rule } => format!("symmetry={}", rule_label(*rule)),
                Evidence::Positivity => "positivity".to_string(),
                Evidence::Numeric { class, integral, .. } => format!("numeric={}:{}", class_label(*class), integral.value),
                Evidence::QuadratureFailure { .. } => "quadrature_failure".to_string(),
            };
            format!("({},{}):{how}", e.j, e.k)
        })
        .collect::<Vec<_>>()
        .join(";")
}

pub fn representations_label(reps: &[(u32, u32)]) -> String {
    reps.iter().map(|(j, k)| format!("({j},{k})")).collect::<Vec<_>>().join(";")
}

fn join_rationals(values: &[Rational]) -> String {
    if values.is_empty() {
        return "(none)".to_string();
    }
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// One CSV line of a verdict table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRow {
    pub polynomial: String,
    pub weights: String,
    pub d: u64,
    pub s0: String,
    pub status: String,
    pub representations: String,
    pub evidence: String,
}

impl VerdictRow {
    pub fn new(f: &Poly, w: &Weights, v: &PoleVerdict) -> Self {
        Self {
            polynomial: f.to_string(),
            weights: w.to_string(),
            d: v.root.d,
            s0: v.root.s0.to_string(),
            status: status_label(v.status).to_string(),
            representations: representations_label(&v.root.representations),
            evidence: evidence_summary(v),
        }
    }
}

pub(crate) fn csv_string<T: Serialize>(rows: &[T]) -> Result<String, Error> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    let bytes = writer.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub(crate) fn json_string<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    text
}

impl Report {
    pub fn has_indeterminate(&self) -> bool {
        self.window_roots.iter().any(|v| v.status == PoleStatus::Indeterminate)
    }

    pub fn to_json(&self) -> String {
        json_string(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn rows(&self) -> Vec<VerdictRow> {
        self.window_roots
            .iter()
            .map(|v| VerdictRow::new(&self.input.polynomial, &self.input.weights, v))
            .collect()
    }

    pub fn to_csv(&self) -> Result<String, Error> {
        csv_string(&self.rows())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &self.input.weights;
        let source = match self.input.weights_source {
            WeightsSource::Inferred => "inferred",
            WeightsSource::Explicit => "explicit",
        };
        let _ = writeln!(out, "{} {}", self.tool.name, self.tool.version);
        let _ = writeln!(out, "f = {}    type {w} ({source})", self.input.polynomial);
        let labels = self.validation.symmetry.labels();
        let _ = writeln!(
            out,
            "symmetry: {}    D = {}    m - bD = {}",
            if labels.is_empty() { "none".to_string() } else { labels.join(", ") },
            self.validation.restriction_degree,
            self.validation.m_minus_b_d
        );
        let _ = writeln!(out, "milnor number: {}", self.milnor_number);
        let _ = writeln!(out, "b_f roots: {}", join_rationals(&self.full_roots));
        let _ = writeln!(out, "window roots in (-1, 0):");
        if self.window_roots.is_empty() {
            let _ = writeln!(out, "  (none)");
        }
        for v in &self.window_roots {
            let _ = writeln!(out, "  s0 = {:<8} d = {:<4} {}", v.root.s0.to_string(), v.root.d, status_label(v.status));
            for e in &v.evidence {
                let how = match &e.evidence {
                    Evidence::Symmetry { rule } => format!("vanishes by symmetry ({})", rule_label(*rule)),
                    Evidence::Positivity => "positive integrand".to_string(),
                    Evidence::Numeric {
                        class,
                        threshold,
                        integral,
                    } => format!(
                        "I = {:.12e} ± {:.1e}  [{}, threshold {:.1e}]",
                        integral.value,
                        integral.abs_error_estimate,
                        class_label(*class),
                        threshold
                    ),
                    Evidence::QuadratureFailure { reason } => format!("quadrature failed: {reason}"),
                };
                let _ = writeln!(out, "      (j,k) = ({},{}): {how}", e.j, e.k);
            }
        }
        let _ = writeln!(out, "eigenvalue classes:");
        if self.eigenvalues.classes.is_empty() {
            let _ = writeln!(out, "  (none)");
        }
        for c in &self.eigenvalues.classes {
            let pole = match c.pole {
                Some(true) => "pole",
                Some(false) => "not a pole",
                None => "unknown",
            };
            let _ = writeln!(out, "  theta = {:<8} alpha1 = {:<8} {pole}: {}", c.theta.to_string(), c.alpha1.to_string(), c.note);
        }
        out
    }
}

/// Window and/or full root lists without classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootsReport {
    pub tool: ToolInfo,
    pub input: InputEcho,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Vec<CandidateRoot>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "crate::rational_serde::option_vec")]
    pub full: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub milnor_number: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct RootRow {
    kind: &'static str,
    s0: String,
    d: Option<u64>,
    representations: String,
}

pub fn roots(f: &Poly, explicit: Option<Weights>, window: bool, full: bool) -> Result<RootsReport, Error> {
    let input = InputEcho::prepare(f, explicit)?;
    let w = input.weights;
    let full_roots = full.then(|| full_bs_roots(f, &w)).transpose()?;
    Ok(RootsReport {
        tool: ToolInfo::current(),
        window: window.then(|| window_roots(&w)),
        milnor_number: full.then(|| milnor_number(f, &w)),
        full: full_roots,
        input,
    })
}

impl RootsReport {
    pub fn to_json(&self) -> String {
        json_string(self)
    }

    pub fn to_csv(&self) -> Result<String, Error> {
        let mut rows = Vec::new();
        for r in self.window.iter().flatten() {
            rows.push(RootRow {
                kind: "window",
                s0: r.s0.to_string(),
                d: Some(r.d),
                representations: representations_label(&r.representations),
            });
        }
        for r in self.full.iter().flatten() {
            rows.push(RootRow {
                kind: "full",
                s0: r.to_string(),
                d: None,
                representations: String::new(),
            });
        }
        csv_string(&rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "f = {}    type {}", self.input.polynomial, self.input.weights);
        if let Some(window) = &self.window {
            let s0s: Vec<Rational> = window.iter().map(|r| r.s0.clone()).collect();
            let _ = writeln!(out, "window roots: {}", join_rationals(&s0s));
        }
        if let Some(full) = &self.full {
            let _ = writeln!(out, "b_f roots: {}", join_rationals(full));
        }
        if let Some(mu) = self.milnor_number {
            let _ = writeln!(out, "milnor number: {mu}");
        }
        out
    }
}

/// One criterion integral with its classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralReport {
    pub tool: ToolInfo,
    pub input: InputEcho,
    pub d: u64,
    pub j: u32,
    pub k: u32,
    #[serde(with = "crate::rational_serde")]
    pub s0: Rational,
    pub integral: IntegralResult,
    pub threshold: f64,
    pub class: NumericClass,
    pub symmetry_rule: Option<SymmetryRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn integral(f: &Poly, explicit: Option<Weights>, d: u64, j: u32, k: u32, tol: &Tolerances) -> Result<IntegralReport, Error> {
    check_tolerances(tol)?;
    let input = InputEcho::prepare(f, explicit)?;
    let w = input.weights;
    if (j as u64 + 1) * w.a + (k as u64 + 1) * w.b != d {
        return Err(Error::InvalidArgument(format!(
            "(j,k) = ({j},{k}) is not a representation of d = {d} for type {w}: (j+1)a + (k+1)b = {}",
            (j as u64 + 1) * w.a + (k as u64 + 1) * w.b
        )));
    }
    let s0 = Rational::new(-BigInt::from(d), BigInt::from(w.m));
    crate::quadrature::convergence_precheck(f, &w, &s0, k)?;
    let result = singular_integral(f, &s0, j, k, tol)?;
    let threshold = zero_threshold(tol, result.l1_mass);
    let rule = vanishing_rule(&symmetry_class(f), j, k);
    Ok(IntegralReport {
        tool: ToolInfo::current(),
        input,
        d,
        j,
        k,
        s0,
        class: classify_value(result.value, threshold),
        threshold,
        symmetry_rule: rule,
        note: rule.map(|r| format!("symmetry ({}) predicts an exact 0", rule_label(r))),
        integral: result,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct IntegralRow {
    polynomial: String,
    weights: String,
    d: u64,
    j: u32,
    k: u32,
    s0: String,
    value: f64,
    abs_error_estimate: f64,
    l1_mass: f64,
    threshold: f64,
    class: &'static str,
    symmetry_rule: &'static str,
}

impl IntegralReport {
    pub fn to_json(&self) -> String {
        json_string(self)
    }

    pub fn to_csv(&self) -> Result<String, Error> {
        csv_string(&[IntegralRow {
            polynomial: self.input.polynomial.to_string(),
            weights: self.input.weights.to_string(),
            d: self.d,
            j: self.j,
            k: self.k,
            s0: self.s0.to_string(),
            value: self.integral.value,
            abs_error_estimate: self.integral.abs_error_estimate,
            l1_mass: self.integral.l1_mass,
            threshold: self.threshold,
            class: class_label(self.class),
            symmetry_rule: self.symmetry_rule.map_or("", rule_label),
        }])
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "f = {}    type {}", self.input.polynomial, self.input.weights);
        let _ = writeln!(out, "s0 = {} (d = {}), (j,k) = ({},{})", self.s0, self.d, self.j, self.k);
        let _ = writeln!(
            out,
            "I = {:.15e} ± {:.1e}    [{}, threshold {:.1e}]",
            self.integral.value,
            self.integral.abs_error_estimate,
            class_label(self.class),
            self.threshold
        );
        let _ = writeln!(out, "L1 mass = {:.6e}, {} evaluations", self.integral.l1_mass, self.integral.evaluations);
        if let Some(note) = &self.note {
            let _ = writeln!(out, "note: {note}");
        }
        out
    }
}

/// Residue of `Z_{f,φ}` at `-d/m` for `φ = bump_phi(m, i, j)`, computed two ways.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidueReport {
    pub tool: ToolInfo,
    pub input: InputEcho,
    pub d: u64,
    #[serde(with = "crate::rational_serde")]
    pub s0: Rational,
    /// `φ` has `∂^{i+j}φ(0,0)/∂x^i∂y^j = 1` and all other partials of order `< m` zero.
    pub i: u32,
    pub j: u32,
    pub bump_degree: usize,
    pub closed_form: f64,
    pub numeric_fit: Option<f64>,
    pub samples: Option<FitSamples>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_error: Option<String>,
    pub absolute_difference: Option<f64>,
    pub relative_difference: Option<f64>,
}

/// `i`, `j` default to the first representation of `d`.
pub fn residue(
    f: &Poly,
    explicit: Option<Weights>,
    d: u64,
    ij: Option<(u32, u32)>,
    tol: &Tolerances,
) -> Result<ResidueReport, Error> {
    check_tolerances(tol)?;
    let input = InputEcho::prepare(f, explicit)?;
    let w = input.weights;
    let reps = representations(&w, d);
    let (i, j) = match ij {
        Some(ij) => ij,
        None => reps.first().copied().unwrap_or((0, 0)),
    };
    let bump_degree = w.m as usize;
    let phi = bump_phi(bump_degree, i as usize, j as usize);
    let closed_form = residue_closed_form(f, &w, d, &phi, tol)?;
    let (samples, numeric_fit, fit_error) = match residue_fit_samples(f, &w, d, &phi, tol) {
        Ok(samples) => match samples.check(FIT_TOL) {
            Ok(fit) => (Some(samples), Some(fit), None),
            Err(e) => (Some(samples), None, Some(e.to_string())),
        },
        Err(e) => (None, None, Some(e.to_string())),
    };
    let absolute_difference = numeric_fit.map(|fit| (fit - closed_form).abs());
    let relative_difference = absolute_difference.filter(|_| closed_form != 0.0).map(|gap| gap / closed_form.abs());
    Ok(ResidueReport {
        tool: ToolInfo::current(),
        input,
        d,
        s0: Rational::new(-BigInt::from(d), BigInt::from(w.m)),
        i,
        j,
        bump_degree,
        closed_form,
        numeric_fit,
        samples,
        fit_error,
        absolute_difference,
        relative_difference,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct ResidueRow {
    polynomial: String,
    weights: String,
    d: u64,
    s0: String,
    i: u32,
    j: u32,
    closed_form: f64,
    numeric_fit: Option<f64>,
    relative_difference: Option<f64>,
}

impl ResidueReport {
    pub fn to_json(&self) -> String {
        json_string(self)
    }

    pub fn to_csv(&self) -> Result<String, Error> {
        csv_string(&[ResidueRow {
            polynomial: self.input.polynomial.to_string(),
            weights: self.input.weights.to_string(),
            d: self.d,
            s0: self.s0.to_string(),
            i: self.i,
            j: self.j,
            closed_form: self.closed_form,
            numeric_fit: self.numeric_fit,
            relative_difference: self.relative_difference,
        }])
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "f = {}    type {}", self.input.polynomial, self.input.weights);
        let _ = writeln!(out, "s0 = {} (d = {}), phi = bump of degree {} at (i,j) = ({},{})", self.s0, self.d, self.bump_degree, self.i, self.j);
        let _ = writeln!(out, "closed form: {:.15e}", self.closed_form);
        match (self.numeric_fit, &self.fit_error) {
            (Some(fit), _) => {
                let _ = writeln!(out, "numeric fit: {fit:.15e}");
            }
            (None, Some(e)) => {
                let _ = writeln!(out, "numeric fit: unavailable ({e})");
            }
            (None, None) => {}
        }
        if let Some(gap) = self.absolute_difference {
            let _ = writeln!(out, "absolute difference: {gap:.3e}");
        }
        if let Some(rel) = self.relative_difference {
            let _ = writeln!(out, "relative difference: {rel:.3e}");
        }
        out
    }
}
