//! Gevrey derivative-growth certificates for the star-product series.
//!
//! A [`GevreyBound`] `(C, B, β)` asserts `sup |D^q f| <= C B^{|q|} (q!)^β`
//! for every multi-order `q`. Under that hypothesis the `n`-th series term
//! is bounded by
//!
//! ```text
//! t_n = C_f C_g ((‖θ‖/2) B_f B_g)^n (n!)^{2 β_max - 1}
//! ```
//!
//! which decays factorially for `β_max < 1/2`, geometrically at the
//! boundary `β_max = 1/2` and grows for `β_max > 1/2`.
//!
//! With `‖θ‖` the max-abs entry, [`term_bound`] follows the formula
//! literally. The series sums over all `d^2` index pairs, so the rigorous
//! bound on a computed term replaces `‖θ‖` by `Σ|θ^{μν}|`
//! ([`ThetaMatrix::pair_sum`], at most `d^2 ‖θ‖`); [`term_bound_scaled`]
//! and [`tail_bound`] take that scale explicitly.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::gaussian::GaussianTestFn;
use crate::theta::ThetaMatrix;

/// Cramér's constant: `|H_n(x)| e^{-x^2/2} <= K 2^{n/2} sqrt(n!)` for the
/// physicists' Hermite polynomials.
pub const CRAMER_CONSTANT: f64 = 1.086_435;

/// Number of successive ratios reported in a certificate.
pub const RATIO_TRACE_LEN: usize = 21;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GevreyBound {
    pub c: f64,
    pub b: f64,
    pub beta: f64,
}

impl GevreyBound {
    pub fn new(c: f64, b: f64, beta: f64) -> Result<Self> {
        if !(c >= 0.0) || !c.is_finite() {
            return Err(Error::InvalidConfig("Gevrey amplitude C must be non-negative"));
        }
        if !(b > 0.0) || !b.is_finite() {
            return Err(Error::InvalidConfig("Gevrey scale B must be positive"));
        }
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::InvalidConfig("Gevrey index beta must be non-negative"));
        }
        Ok(GevreyBound { c, b, beta })
    }

    /// Bound for a finite sum of plane waves: `C = Σ|c|`, `B = max|k_μ|`,
    /// `β = 0`. Polynomial factors are unbounded, so those get `None`.
    pub fn for_expr(e: &Expr) -> Option<Self> {
        if !e.is_trigonometric() {
            return None;
        }
        let b = e.terms().iter().fold(0.0, |m: f64, t| m.max(t.wave.max_abs()));
        // a constant has no derivatives; any positive scale works
        let b = if b > 0.0 { b } else { 1.0 };
        Some(GevreyBound { c: e.l1_norm(), b, beta: 0.0 })
    }

    /// Bound for an axis-aligned Gaussian with constant prefactor, from
    /// Cramér's inequality: `C = |P| K^d`, `B = max_μ(|t_μ| + 1/σ_μ)`,
    /// `β = 1/2`.
    pub fn for_gaussian(g: &GaussianTestFn) -> Option<Self> {
        let sigma = g.sigma()?;
        if g.prefactor().degree() > 0 || !g.prefactor().is_polynomial() {
            return None;
        }
        let amp = g.prefactor().constant_part().norm();
        let b = sigma
            .iter()
            .zip(g.tilt())
            .fold(0.0, |m: f64, (s, t)| m.max(t.abs() + 1.0 / s));
        let c = amp * libm::pow(CRAMER_CONSTANT, g.dim() as f64);
        Some(GevreyBound { c, b, beta: 0.5 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Converges,
    Diverges,
    BoundaryConverges,
    BoundaryDiverges,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Converges => "converges",
            Verdict::Diverges => "diverges",
            Verdict::BoundaryConverges => "boundary-converges",
            Verdict::BoundaryDiverges => "boundary-diverges",
        }
    }

    pub fn is_convergent(&self) -> bool {
        matches!(self, Verdict::Converges | Verdict::BoundaryConverges)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub verdict: Verdict,
    /// `t_{n+1} / t_n` for `n = 0..RATIO_TRACE_LEN`.
    pub ratio_trace: Vec<f64>,
    pub f: GevreyBound,
    pub g: GevreyBound,
    pub theta_norm: f64,
}

fn ln_factorial(n: usize) -> f64 {
    libm::lgamma(n as f64 + 1.0)
}

/// `t_n` with `‖θ‖` the max-abs entry of `theta`.
pub fn term_bound(n: usize, bf: &GevreyBound, bg: &GevreyBound, theta: &ThetaMatrix) -> f64 {
    term_bound_scaled(n, bf, bg, theta.norm())
}

/// `t_n` with an explicit θ scale in place of `‖θ‖`.
pub fn term_bound_scaled(n: usize, bf: &GevreyBound, bg: &GevreyBound, theta_scale: f64) -> f64 {
    let amp = bf.c * bg.c;
    if n == 0 || amp == 0.0 {
        return amp;
    }
    let r = 0.5 * theta_scale * bf.b * bg.b;
    if r == 0.0 {
        return 0.0;
    }
    let expo = 2.0 * bf.beta.max(bg.beta) - 1.0;
    libm::exp(libm::log(amp) + n as f64 * libm::log(r) + expo * ln_factorial(n))
}

/// `t_{n+1} / t_n = r (n+1)^{2β_max - 1}`.
fn ratio(n: usize, r: f64, expo: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    r * libm::pow((n + 1) as f64, expo)
}

/// Upper bound on `Σ_{n > order} t_n`: explicit terms while the ratio is at
/// least one, then a geometric tail from the first ratio below one. The
/// ratios are non-increasing for `β_max <= 1/2`; beyond that, and on the
/// boundary with ratio `>= 1`, there is no finite bound.
pub fn tail_bound(order: usize, bf: &GevreyBound, bg: &GevreyBound, theta_scale: f64) -> Option<f64> {
    let r = 0.5 * theta_scale * bf.b * bg.b;
    if r == 0.0 || bf.c * bg.c == 0.0 {
        return Some(0.0);
    }
    let expo = 2.0 * bf.beta.max(bg.beta) - 1.0;
    if expo > 0.0 || (expo == 0.0 && r >= 1.0) {
        return None;
    }
    let mut sum = 0.0;
    let mut n = order + 1;
    // ratios fall like r / n^{1 - 2β}; this cap is only reached for absurd r
    for _ in 0..1_000_000 {
        let t = term_bound_scaled(n, bf, bg, theta_scale);
        let rho = ratio(n, r, expo);
        if rho < 1.0 {
            return Some(sum + t / (1.0 - rho));
        }
        sum += t;
        n += 1;
    }
    None
}

/// Convergence verdict for the star series of two functions with the given
/// Gevrey bounds.
pub fn certify_convergence(bf: &GevreyBound, bg: &GevreyBound, theta: &ThetaMatrix) -> Certificate {
    let theta_norm = theta.norm();
    let beta = bf.beta.max(bg.beta);
    let expo = 2.0 * beta - 1.0;
    let r = 0.5 * theta_norm * bf.b * bg.b;
    let verdict = if theta_norm == 0.0 || expo < 0.0 {
        Verdict::Converges
    } else if expo > 0.0 {
        Verdict::Diverges
    } else if r < 1.0 {
        Verdict::BoundaryConverges
    } else {
        Verdict::BoundaryDiverges
    };
    let ratio_trace = (0..RATIO_TRACE_LEN).map(|n| ratio(n, r, expo)).collect();
    Certificate { verdict, ratio_trace, f: *bf, g: *bg, theta_norm }
}
