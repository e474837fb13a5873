//! Fixed quadrature rules on `[-1, 1]`.

use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights of a rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `P_n^{(0,β)}(x)` and `P_{n-1}^{(0,β)}(x)`.
fn jacobi_pair(n: usize, beta: f64, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    if n == 0 {
        return (p0, 0.0);
    }
    let mut p1 = 1.0 + (beta + 2.0) * (x - 1.0) / 2.0;
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + beta;
        let a1 = 2.0 * k * (k + beta) * (c - 2.0);
        let a2 = (c - 1.0) * (c * (c - 2.0) * x - beta * beta);
        let a3 = 2.0 * (k - 1.0) * (k + beta - 1.0) * c;
        let p2 = (a2 * p1 - a3 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// `(1 - x²) P_n'(x)` from `P_n`, `P_{n-1}`.
fn jacobi_scaled_derivative(n: usize, beta: f64, x: f64, pn: f64, pn1: f64) -> f64 {
    let nf = n as f64;
    let c = 2.0 * nf + beta;
    (nf * (-beta - c * x) * pn + 2.0 * nf * (nf + beta) * pn1) / c
}

/// `n`-point Gauss rule for the weight `(1 + t)^β` on `[-1, 1]`, `β > -1`.
///
/// Nodes come from the Golub–Welsch eigenproblem and are polished by Newton's method
/// on the three-term recurrence; weights use the closed form
/// `w = 2^{β+1} / ((1 - x²) P_n'(x)²)`.
pub fn gauss_jacobi_rule(beta: f64, n: usize) -> Rule {
    assert!(beta > -1.0, "Gauss-Jacobi exponent must exceed -1");
    assert!(n > 0, "rule needs at least one node");
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let c = 2.0 * kf + beta;
        jacobi[(k, k)] = if k == 0 {
            beta / (beta + 2.0)
        } else {
            beta * beta / (c * (c + 2.0))
        };
        if k + 1 < n {
            let j = kf + 1.0;
            let c = 2.0 * j + beta;
            let off = (4.0 * j * j * (j + beta) * (j + beta) / (c * c * (c + 1.0) * (c - 1.0))).sqrt();
            jacobi[(k, k + 1)] = off;
            jacobi[(k + 1, k)] = off;
        }
    }
    let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi).eigenvalues.iter().copied().collect();
    nodes.sort_by(f64::total_cmp);

    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (pn, pn1) = jacobi_pair(n, beta, *x);
            let dp = jacobi_scaled_derivative(n, beta, *x, pn, pn1) / (1.0 - *x * *x);
            let step = pn / dp;
            if !step.is_finite() {
                break;
            }
            *x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        let (pn, pn1) = jacobi_pair(n, beta, *x);
        let scaled = jacobi_scaled_derivative(n, beta, *x, pn, pn1);
        // (1-x²) P'² = scaled² / (1-x²)
        weights.push(2f64.powf(beta + 1.0) * (1.0 - *x * *x) / (scaled * scaled));
    }
    Rule { nodes, weights }
}

pub fn gauss_legendre_rule(n: usize) -> Rule {
    gauss_jacobi_rule(0.0, n)
}

/// Kronrod nodes (nonnegative half) of the 21-point rule, descending.
pub(crate) const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];

/// Weights of the embedded 10-point Gauss rule at `XGK[1], XGK[3], …, XGK[9]`.
pub(crate) const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

pub(crate) const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

/// One Gauss–Kronrod 21 panel on `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PanelEstimate {
    pub value: f64,
    /// `|K21 - G10|`.
    pub error: f64,
    /// Kronrod estimate of `∫|F|`.
    pub l1: f64,
}

pub fn gauss_kronrod21<F: Fn(f64) -> f64 + ?Sized>(f: &F, lo: f64, hi: f64) -> PanelEstimate {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut l1 = WGK[10] * fc.abs();
    let mut gauss = 0.0;
    for (i, &x) in XGK[..10].iter().enumerate() {
        let f1 = f(center - half * x);
        let f2 = f(center + half * x);
        kronrod += WGK[i] * (f1 + f2);
        l1 += WGK[i] * (f1.abs() + f2.abs());
        if i % 2 == 1 {
            gauss += WG[i / 2] * (f1 + f2);
        }
    }
    PanelEstimate {
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
        l1: l1 * half.abs(),
    }
}
