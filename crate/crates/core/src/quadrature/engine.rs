//! Global adaptive integration over charts with a known algebraic endpoint factor.
//!
//! A chart is an interval `[lo, hi]` in a local variable `x` on which the integrand
//! is `x^e · h(x)` with `h` smooth. Pieces touching `x = 0` with `e ≠ 0` use
//! Gauss–Jacobi rules for the weight `x^e`; every other piece uses Gauss–Kronrod 21.
//! The piece with the largest error estimate is bisected until the summed error
//! drops below the target.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Signed};

use super::rules::{gauss_jacobi_rule, gauss_kronrod21, Rule};
use super::{IntegralResult, Method, QuadratureError, Segment, Tolerances};
use crate::poly::{PolyError, RootInterval, UniPoly};
use crate::sum::CompensatedSum;
use crate::{to_f64, Rational};

fn cached_rule(exponent: f64, n: usize) -> Arc<Rule> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), Arc<Rule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (exponent.to_bits(), n);
    if let Some(rule) = cache.lock().expect("rule cache").get(&key) {
        return rule.clone();
    }
    let rule = Arc::new(gauss_jacobi_rule(exponent, n));
    cache
        .lock()
        .expect("rule cache")
        .entry(key)
        .or_insert(rule)
        .clone()
}

pub(crate) struct Chart<'a> {
    pub exponent: f64,
    pub h: Box<dyn Fn(f64) -> f64 + Sync + 'a>,
    pub lo: f64,
    pub hi: f64,
    /// Interior points where `h` is only piecewise smooth.
    pub cuts: Vec<f64>,
    pub method: Method,
    /// Image of `[lo, hi]` in the original variable; `None` is infinite.
    pub u_range: (Option<f64>, Option<f64>),
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    chart: usize,
    lo: f64,
    hi: f64,
    singular: bool,
    value: f64,
    error: f64,
    l1: f64,
    evals: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct EngineOutput {
    pub value: f64,
    pub error: f64,
    pub l1: f64,
    pub evals: usize,
    pub segments: Vec<Segment>,
}

fn evaluate(chart: &Chart<'_>, lo: f64, hi: f64, singular: bool, gj_nodes: usize) -> Piece {
    if singular {
        let half = 0.5 * (hi - lo);
        let scale = half.powf(chart.exponent + 1.0);
        let run = |n: usize| {
            let rule = cached_rule(chart.exponent, n);
            let mut value = CompensatedSum::new();
            let mut l1 = 0.0;
            for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
                let fx = (chart.h)(lo + half * (1.0 + t));
                value.add(w * fx);
                l1 += w * fx.abs();
            }
            (scale * value.value(), scale * l1)
        };
        let (fine, l1) = run(gj_nodes);
        let (coarse, _) = run((gj_nodes / 2).max(1));
        Piece {
            chart: 0,
            lo,
            hi,
            singular,
            value: fine,
            error: (fine - coarse).abs(),
            l1,
            evals: gj_nodes + (gj_nodes / 2).max(1),
        }
    } else {
        let e = chart.exponent;
        let est = if e == 0.0 {
            gauss_kronrod21(&*chart.h, lo, hi)
        } else {
            gauss_kronrod21(&|x: f64| x.powf(e) * (chart.h)(x), lo, hi)
        };
        Piece {
            chart: 0,
            lo,
            hi,
            singular,
            value: est.value,
            error: est.error,
            l1: est.l1,
            evals: 21,
        }
    }
}

/// Integrates the sum over all charts to `tol.rel_err` relative to the L¹ mass.
pub(crate) fn adapt(charts: &[Chart<'_>], tol: &Tolerances, abs_floor: f64) -> Result<EngineOutput, QuadratureError> {
    let mut pieces = Vec::new();
    for (index, chart) in charts.iter().enumerate() {
        if chart.hi <= chart.lo {
            continue;
        }
        let mut points = vec![chart.lo];
        let mut cuts: Vec<f64> = chart
            .cuts
            .iter()
            .copied()
            .filter(|&c| c > chart.lo && c < chart.hi)
            .collect();
        cuts.sort_by(f64::total_cmp);
        points.extend(cuts);
        points.push(chart.hi);
        for pair in points.windows(2) {
            let singular = chart.exponent != 0.0 && pair[0] == 0.0;
            let mut piece = evaluate(chart, pair[0], pair[1], singular, tol.gj_nodes);
            piece.chart = index;
            pieces.push(piece);
        }
    }

    let totals = |pieces: &[Piece]| {
        let error: f64 = pieces.iter().map(|p| p.error).sum();
        let l1: f64 = pieces.iter().map(|p| p.l1).sum();
        (error, l1)
    };
    loop {
        let (error, l1) = totals(&pieces);
        if !error.is_finite() || !l1.is_finite() {
            return Err(QuadratureError::Failure {
                reason: "non-finite integrand value".into(),
                value: f64::NAN,
                error,
            });
        }
        let target = (tol.rel_err * l1).max(abs_floor);
        if error <= target || pieces.len() >= tol.max_pieces {
            break;
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, _)| i)
            .expect("nonempty");
        let old = pieces.swap_remove(worst);
        let chart = &charts[old.chart];
        let mid = 0.5 * (old.lo + old.hi);
        if !(mid > old.lo && mid < old.hi) {
            // cannot bisect further; freeze this piece
            pieces.push(Piece { error: 0.0, ..old });
            let (error, l1) = totals(&pieces);
            return Err(QuadratureFailure::resolution(error + old.error, l1));
        }
        let mut left = evaluate(chart, old.lo, mid, old.singular, tol.gj_nodes);
        let mut right = evaluate(chart, mid, old.hi, false, tol.gj_nodes);
        left.chart = old.chart;
        right.chart = old.chart;
        left.evals += old.evals;
        pieces.push(left);
        pieces.push(right);
    }

    pieces.sort_by(|a, b| a.chart.cmp(&b.chart).then(a.lo.total_cmp(&b.lo)));
    let value: CompensatedSum = pieces.iter().map(|p| p.value).collect();
    let error: CompensatedSum = pieces.iter().map(|p| p.error).collect();
    let l1: CompensatedSum = pieces.iter().map(|p| p.l1).collect();
    let (value, error, l1) = (value.value(), error.value(), l1.value());
    let target = (tol.rel_err * l1).max(abs_floor);
    if !value.is_finite() || error > 10.0 * target {
        return Err(QuadratureError::Failure {
            reason: format!(
                "error estimate {error:.3e} above 10x target {target:.3e} after {} pieces",
                pieces.len()
            ),
            value,
            error,
        });
    }
    let segments = charts
        .iter()
        .enumerate()
        .filter(|(_, c)| c.hi > c.lo)
        .map(|(index, chart)| Segment {
            lo: chart.u_range.0,
            hi: chart.u_range.1,
            method: chart.method,
            nodes: pieces.iter().filter(|p| p.chart == index).map(|p| p.evals).sum(),
        })
        .collect::<Vec<_>>();
    let evals = pieces.iter().map(|p| p.evals).sum();
    Ok(EngineOutput {
        value,
        error,
        l1,
        evals,
        segments,
    })
}

struct QuadratureFailure;

impl QuadratureFailure {
    fn resolution(error: f64, l1: f64) -> QuadratureError {
        QuadratureError::Failure {
            reason: format!("interval too small to bisect (error {error:.3e}, mass {l1:.3e})"),
            value: f64::NAN,
            error,
        }
    }
}

/// Weight `W(u)` multiplying `|g(u)|^s` in a line integral.
pub trait LineWeight: Sync {
    fn value(&self, u: f64) -> f64;

    /// Points where `W` is not smooth.
    fn breaks(&self) -> Vec<f64> {
        Vec::new()
    }

    /// `γ` in `W(σ/v) = v^γ · tail(v, σ)`.
    fn tail_gamma(&self) -> f64;

    /// Tails are integrated in `w` with `v = w^p`, chosen so `tail` is smooth in `w`.
    fn tail_power(&self) -> u32 {
        1
    }

    /// `W(σ/v) / v^γ` at `v = w^p`.
    fn tail(&self, w: f64, sigma: f64) -> f64;
}

/// `W(u) = u^k`.
pub struct MonomialWeight(pub u32);

impl LineWeight for MonomialWeight {
    fn value(&self, u: f64) -> f64 {
        u.powi(self.0 as i32)
    }

    fn breaks(&self) -> Vec<f64> {
        // |u^k| has a kink at the origin
        if self.0 % 2 == 1 {
            vec![0.0]
        } else {
            Vec::new()
        }
    }

    fn tail_gamma(&self) -> f64 {
        -(self.0 as f64)
    }

    fn tail(&self, _w: f64, sigma: f64) -> f64 {
        sigma.powi(self.0 as i32)
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Real roots of `g` with exact Taylor expansions about each (rational) anchor.
#[derive(Debug, Clone)]
pub(crate) struct RootExpansion {
    pub anchor: f64,
    /// Coefficients of `g(anchor + τ)` in ascending powers of `τ`.
    pub shifted: Vec<f64>,
    pub interval: RootInterval,
}

pub(crate) fn expand_at_roots(g: &UniPoly, width: &Rational) -> Result<Vec<RootExpansion>, PolyError> {
    Ok(g
        .isolate_real_roots(width)?
        .into_iter()
        .map(|interval| {
            let anchor = interval.midpoint();
            RootExpansion {
                anchor: to_f64(&anchor),
                shifted: g.taylor_shift(&anchor).to_f64_coeffs(),
                interval,
            }
        })
        .collect())
}

/// Half-width `L` of the root-containing window: `⌈2(1 + max|root|)⌉`.
pub(crate) fn window_half_width(roots: &[&RootExpansion]) -> f64 {
    let max = roots
        .iter()
        .map(|r| r.interval.lo.abs().max(r.interval.hi.abs()))
        .max()
        .unwrap_or_else(Rational::one);
    to_f64(&(Rational::from_integer(2.into()) * (Rational::one() + max)).ceil())
}

/// Charts covering `ℝ` for `coef · |g(u)|^s · W(u)`.
pub(crate) fn line_charts<'a>(
    coef: f64,
    g: &'a UniPoly,
    roots: &'a [RootExpansion],
    half_width: f64,
    s: f64,
    weight: &'a dyn LineWeight,
) -> Vec<Chart<'a>> {
    let mut charts = Vec::new();
    let breaks = weight.breaks();
    let g_f64 = g.to_f64_coeffs();
    let degree = g_f64.len() - 1;

    if roots.is_empty() {
        let g_f64 = g_f64.clone();
        charts.push(Chart {
            exponent: 0.0,
            h: Box::new(move |u| coef * horner(&g_f64, u).abs().powf(s) * weight.value(u)),
            lo: -half_width,
            hi: half_width,
            cuts: breaks.clone(),
            method: Method::Adaptive,
            u_range: (Some(-half_width), Some(half_width)),
        });
    }
    for (i, root) in roots.iter().enumerate() {
        let r = root.anchor;
        let left_end = if i == 0 {
            -half_width
        } else {
            0.5 * (roots[i - 1].anchor + r)
        };
        let right_end = if i + 1 == roots.len() {
            half_width
        } else {
            0.5 * (r + roots[i + 1].anchor)
        };
        for side in [-1.0, 1.0] {
            let shifted = &root.shifted;
            // g(r + side·x) / x
            let quotient = move |x: f64| {
                let mut acc = 0.0;
                for (p, &c) in shifted.iter().enumerate().skip(1).rev() {
                    acc = acc * x + if p % 2 == 1 { side * c } else { c };
                }
                acc + shifted[0] / x
            };
            let width = if side < 0.0 { r - left_end } else { right_end - r };
            charts.push(Chart {
                exponent: s,
                h: Box::new(move |x| coef * quotient(x).abs().powf(s) * weight.value(r + side * x)),
                lo: 0.0,
                hi: width,
                cuts: breaks.iter().map(|&b| side * (b - r)).collect(),
                method: Method::GaussJacobi,
                u_range: if side < 0.0 {
                    (Some(left_end), Some(r))
                } else {
                    (Some(r), Some(right_end))
                },
            });
        }
    }

    // tails: u = σ/v, v = w^p
    let gamma = weight.tail_gamma();
    let p = weight.tail_power();
    let beta = gamma - degree as f64 * s - 2.0;
    let exponent = p as f64 * beta + p as f64 - 1.0;
    let w_max = (1.0 / half_width).powf(1.0 / p as f64);
    for sigma in [-1.0, 1.0] {
        // ṽ(v) = v^D g(σ/v) = Σ g_i σ^i v^{D-i}
        let reversed: Vec<f64> = (0..=degree)
            .map(|e| g_f64[degree - e] * sigma_pow(sigma, degree - e))
            .collect();
        charts.push(Chart {
            exponent,
            h: Box::new(move |w| {
                let v = w.powi(p as i32);
                coef * p as f64 * horner(&reversed, v).abs().powf(s) * weight.tail(w, sigma)
            }),
            lo: 0.0,
            hi: w_max,
            cuts: Vec::new(),
            method: Method::TailTransform,
            u_range: if sigma < 0.0 {
                (None, Some(-half_width))
            } else {
                (Some(half_width), None)
            },
        });
    }
    charts
}

fn sigma_pow(sigma: f64, e: usize) -> f64 {
    if sigma < 0.0 && e % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// `∫_ℝ Σ c_σ |g_σ(u)|^s W(u) du`, each term integrated over its own charts.
pub fn integrate_line(
    terms: &[(f64, UniPoly)],
    s: f64,
    weight: &dyn LineWeight,
    tol: &Tolerances,
) -> Result<IntegralResult, QuadratureError> {
    let mut expansions = Vec::with_capacity(terms.len());
    for (_, g) in terms {
        if g.is_zero() {
            return Err(QuadratureError::ZeroPolynomial);
        }
        let degree = g.degree().expect("nonzero") as f64;
        let beta = weight.tail_gamma() - degree * s - 2.0;
        if beta <= -1.0 {
            return Err(QuadratureError::DivergentTail { exponent: beta });
        }
        expansions.push(expand_at_roots(g, &tol.root_width)?);
    }
    let all_roots: Vec<&RootExpansion> = expansions.iter().flatten().collect();
    let half_width = window_half_width(&all_roots);

    let mut value = CompensatedSum::new();
    let mut error = 0.0;
    let mut l1 = 0.0;
    let mut evaluations = 0;
    let mut segments = Vec::new();
    for ((coef, g), roots) in terms.iter().zip(&expansions) {
        if *coef == 0.0 {
            continue;
        }
        let charts = line_charts(*coef, g, roots, half_width, s, weight);
        let out = adapt(&charts, tol, 0.0)?;
        value.add(out.value);
        error += out.error;
        l1 += out.l1;
        evaluations += out.evals;
        segments.extend(out.segments);
    }
    Ok(IntegralResult {
        value: value.value(),
        abs_error_estimate: error,
        l1_mass: l1,
        segments,
        evaluations,
    })
}

/// `∫_0^{width} x^e h(x) dx` with `h` smooth on `[0, width]`.
pub fn integrate_endpoint<F>(exponent: f64, width: f64, h: F, tol: &Tolerances, abs_floor: f64) -> Result<(f64, f64), QuadratureError>
where
    F: Fn(f64) -> f64 + Sync,
{
    let chart = Chart {
        exponent,
        h: Box::new(h),
        lo: 0.0,
        hi: width,
        cuts: Vec::new(),
        method: Method::GaussJacobi,
        u_range: (Some(0.0), Some(width)),
    };
    let out = adapt(std::slice::from_ref(&chart), tol, abs_floor)?;
    Ok((out.value, out.error))
}

/// `∫_lo^hi f` by adaptive Gauss–Kronrod, split at `cuts`.
pub fn integrate_interval<F>(f: F, lo: f64, hi: f64, cuts: Vec<f64>, tol: &Tolerances, abs_floor: f64) -> Result<(f64, f64), QuadratureError>
where
    F: Fn(f64) -> f64 + Sync,
{
    let chart = Chart {
        exponent: 0.0,
        h: Box::new(f),
        lo,
        hi,
        cuts,
        method: Method::Adaptive,
        u_range: (Some(lo), Some(hi)),
    };
    let out = adapt(std::slice::from_ref(&chart), tol, abs_floor)?;
    Ok((out.value, out.error))
}
