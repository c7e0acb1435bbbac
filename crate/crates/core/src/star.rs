//! The Moyal star product
//!
//! ```text
//! (f ⋆ g)(x) = Σ_n 1/n! ((i/2) θ^{μν} ∂_{x^μ} ∂_{y^ν})^n f(x) g(y) |_{y=x}
//! ```
//!
//! Two independent routes are provided.
//!
//! * The series route ([`StarSeries`], [`star_term`]) works in the doubled
//!   space `(x, y)`: it applies the bidifferential operator `D` to the tensor
//!   product `f(x) g(y)` one order at a time and collapses `y = x` after each
//!   step. For polynomials the terms vanish beyond `min(deg f, deg g)`.
//! * The closed-form route resums the series on plane waves. With
//!   `f = Σ_k P_k(x) e^{ik.x}` and `g = Σ_p Q_p(x) e^{ip.x}`,
//!
//!   ```text
//!   f ⋆ g = Σ_{k,p} e^{-(i/2) kθp} e^{i(k+p).x} [P_k(x - θp/2) ⋆ Q_p(x - kθ/2)]
//!   ```
//!
//!   where the remaining product of shifted polynomials is a terminating
//!   series. Every exponential polynomial therefore has an exact product.
//!
//! Products of more than two factors are left-associated.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::{Expr, MultiIndex, Term, Wave};
use crate::gevrey::{self, GevreyBound};
use crate::theta::ThetaMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StarMode {
    /// Closed form: terminating series for polynomials, twist resummation
    /// for plane-wave parts.
    ExactIfTerminating,
    /// Partial sum through order `N`.
    FixedOrder(usize),
    /// Increase the order until the remainder bound drops to `ε`.
    Adaptive(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarConfig {
    pub mode: StarMode,
    /// Hard cap on the series order in adaptive mode.
    pub max_order: usize,
}

impl Default for StarConfig {
    fn default() -> Self {
        StarConfig { mode: StarMode::ExactIfTerminating, max_order: 64 }
    }
}

impl StarConfig {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn fixed(order: usize) -> Self {
        StarConfig { mode: StarMode::FixedOrder(order), max_order: order }
    }

    pub fn adaptive(eps: f64, max_order: usize) -> Result<Self> {
        let cfg = StarConfig { mode: StarMode::Adaptive(eps), max_order };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if let StarMode::Adaptive(eps) = self.mode {
            if !(eps > 0.0) || !eps.is_finite() {
                return Err(Error::InvalidConfig("adaptive tolerance must be positive"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StarResult {
    pub value: Expr,
    /// Every pairwise series terminated on its own.
    pub terminated: bool,
    /// Highest series order that contributed.
    pub orders_used: usize,
    /// Sup-norm bound on the neglected tail; `Some(0.0)` for exact results.
    pub remainder_bound: Option<f64>,
}

/// Order-by-order expansion of `f ⋆ g`.
pub struct StarSeries {
    dim: usize,
    entries: Vec<(usize, usize, f64)>,
    // D^n (f ⊗ g) (i/2)^n / n! in the doubled space
    current: Expr,
    order: usize,
}

impl StarSeries {
    pub fn new(f: &Expr, g: &Expr, theta: &ThetaMatrix) -> Result<Self> {
        let d = f.dim();
        if g.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: g.dim() });
        }
        if theta.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: theta.dim() });
        }
        let current = f.embed(2 * d, 0).multiply(&g.embed(2 * d, d))?;
        Ok(StarSeries { dim: d, entries: theta.nonzero_entries(), current, order: 0 })
    }

    /// Order of the term the next call to [`next_term`](Self::next_term)
    /// returns.
    pub fn order(&self) -> usize {
        self.order
    }

    /// True once every remaining term is identically zero.
    pub fn is_exhausted(&self) -> bool {
        self.current.is_zero()
    }

    /// Returns the current order's term at the common point and advances.
    pub fn next_term(&mut self) -> Expr {
        let term = collapse(&self.current, self.dim);
        let n = self.order;
        let scale = Complex64::new(0.0, 0.5 / (n + 1) as f64);
        self.current = apply_bidifferential(&self.current, &self.entries, self.dim, scale);
        self.order += 1;
        term
    }
}

/// `c Σ_{(μ,ν,θ)} θ ∂_{x^μ} ∂_{y^ν} e` on a doubled-space expression.
fn apply_bidifferential(e: &Expr, entries: &[(usize, usize, f64)], d: usize, c: Complex64) -> Expr {
    let mut out = Vec::new();
    let mut first = Vec::with_capacity(2);
    let mut second = Vec::with_capacity(4);
    for t in e.terms() {
        for &(mu, nu, th) in entries {
            first.clear();
            partial(t, mu, &mut first);
            second.clear();
            for a in &first {
                partial(a, d + nu, &mut second);
            }
            let s = c * th;
            out.extend(second.drain(..).map(|mut t| {
                t.coeff *= s;
                t
            }));
        }
    }
    Expr::from_terms(2 * d, out)
}

/// Appends the (at most two) terms of `∂_axis t`.
fn partial(t: &Term, axis: usize, out: &mut Vec<Term>) {
    let a = t.monomial.exponents()[axis];
    if a > 0 {
        let mut m = t.monomial.exponents().to_vec();
        m[axis] -= 1;
        out.push(Term::new(t.coeff * a as f64, MultiIndex::new(m), t.wave.clone()));
    }
    let k = t.wave.components()[axis];
    if k != 0.0 {
        out.push(Term::new(t.coeff * Complex64::new(0.0, k), t.monomial.clone(), t.wave.clone()));
    }
}

/// Restricts a doubled-space expression to `y = x`.
fn collapse(e: &Expr, d: usize) -> Expr {
    let terms = e
        .terms()
        .iter()
        .map(|t| {
            let m = t.monomial.exponents();
            let w = t.wave.components();
            Term::new(
                t.coeff,
                MultiIndex::new((0..d).map(|i| m[i] + m[d + i]).collect()),
                Wave::new((0..d).map(|i| w[i] + w[d + i]).collect()),
            )
        })
        .collect();
    Expr::from_terms(d, terms)
}

/// The `n`-th term of the series, at the common point. `n = 0` is `f g`.
pub fn star_term(f: &Expr, g: &Expr, theta: &ThetaMatrix, n: usize) -> Result<Expr> {
    let mut s = StarSeries::new(f, g, theta)?;
    for _ in 0..n {
        if s.is_exhausted() {
            return Ok(Expr::zero(f.dim()));
        }
        s.next_term();
    }
    Ok(s.next_term())
}

/// Closed form for plane waves:
/// `e^{ik.x} ⋆ e^{ip.x} = e^{-(i/2) k θ p} e^{i(k+p).x}`.
pub fn plane_wave_star(k: &[f64], p: &[f64], theta: &ThetaMatrix) -> Result<(Complex64, Vec<f64>)> {
    for v in [k, p] {
        if v.len() != theta.dim() {
            return Err(Error::DimensionMismatch { expected: theta.dim(), found: v.len() });
        }
    }
    let phi = 0.5 * theta.bilinear(k, p);
    let phase = Complex64::new(libm::cos(phi), -libm::sin(phi));
    Ok((phase, k.iter().zip(p).map(|(a, b)| a + b).collect()))
}

struct PairOutcome {
    value: Expr,
    terminated: bool,
    orders_used: usize,
    remainder: Option<f64>,
}

/// Sums a series until it is exhausted; returns (sum, highest nonzero order).
fn sum_terminating(mut s: StarSeries, dim: usize) -> Result<(Expr, usize)> {
    let mut sum = Expr::zero(dim);
    let mut last = 0;
    while !s.is_exhausted() {
        let n = s.order();
        let t = s.next_term();
        if !t.is_zero() {
            last = n;
            sum = sum.add(&t)?;
        }
    }
    Ok((sum, last))
}

fn star_pair_exact(f: &Expr, g: &Expr, theta: &ThetaMatrix) -> Result<PairOutcome> {
    let d = f.dim();
    let mut terms: Vec<Term> = Vec::new();
    let mut terminated = true;
    let mut orders_used = 0;
    let fw = f.split_by_wave();
    let gw = g.split_by_wave();
    for (k, pk) in &fw {
        let k_theta = theta.left(k.components());
        for (p, qp) in &gw {
            let theta_p = theta.right(p.components());
            let coupled = k_theta.iter().chain(&theta_p).any(|&v| v != 0.0);
            let (phase, _) = plane_wave_star(k.components(), p.components(), theta)?;
            let (pk, qp) = if coupled {
                terminated = false;
                let sf: Vec<f64> = theta_p.iter().map(|v| -0.5 * v).collect();
                let sg: Vec<f64> = k_theta.iter().map(|v| -0.5 * v).collect();
                (pk.shift(&sf)?, qp.shift(&sg)?)
            } else {
                (pk.clone(), qp.clone())
            };
            let (poly, last) = sum_terminating(StarSeries::new(&pk, &qp, theta)?, d)?;
            orders_used = orders_used.max(last);
            let wave = sum_waves(k, p);
            terms.extend(poly.scale(phase).times_wave(&wave).terms().iter().cloned());
        }
    }
    Ok(PairOutcome {
        value: Expr::from_terms(d, terms),
        terminated,
        orders_used,
        remainder: Some(0.0),
    })
}

fn sum_waves(k: &Wave, p: &Wave) -> Wave {
    Wave::new(k.components().iter().zip(p.components()).map(|(a, b)| a + b).collect())
}

fn star_pair_series(
    f: &Expr,
    g: &Expr,
    theta: &ThetaMatrix,
    order: Option<usize>,
    eps: Option<f64>,
    max_order: usize,
) -> Result<PairOutcome> {
    let d = f.dim();
    let bounds = GevreyBound::for_expr(f).zip(GevreyBound::for_expr(g));
    let scale = theta.pair_sum();
    let remainder_at = |n: usize| bounds.and_then(|(bf, bg)| gevrey::tail_bound(n, &bf, &bg, scale));
    let mut s = StarSeries::new(f, g, theta)?;
    let mut sum = Expr::zero(d);
    let mut last = 0;
    let cap = order.unwrap_or(max_order);
    loop {
        if s.is_exhausted() {
            return Ok(PairOutcome { value: sum, terminated: true, orders_used: last, remainder: Some(0.0) });
        }
        let n = s.order();
        let t = s.next_term();
        if !t.is_zero() {
            last = n;
            sum = sum.add(&t)?;
        }
        if s.is_exhausted() {
            continue;
        }
        if let Some(eps) = eps {
            let rem = remainder_at(n);
            if let Some(r) = rem {
                if r <= eps {
                    return Ok(PairOutcome { value: sum, terminated: false, orders_used: n, remainder: rem });
                }
            }
            if n >= cap {
                return Err(match rem {
                    Some(bound) => Error::RemainderAboveTolerance { order: n, bound, tol: eps },
                    None => Error::RemainderUnavailable,
                });
            }
        } else if n >= cap {
            return Ok(PairOutcome { value: sum, terminated: false, orders_used: n, remainder: remainder_at(n) });
        }
    }
}

/// Left-associated star product `((f_1 ⋆ f_2) ⋆ f_3) ⋆ ...`.
///
/// In the series modes the remainder of a multi-factor product is tracked
/// in the coefficient l1 norm, which is submultiplicative for plane-wave
/// sums: `R_j = R_{j-1} ‖f_j‖_1 + r_j`.
pub fn star_product(fs: &[Expr], theta: &ThetaMatrix, cfg: &StarConfig) -> Result<StarResult> {
    cfg.validate()?;
    if fs.len() < 2 {
        return Err(Error::TooFewFactors);
    }
    let d = theta.dim();
    for f in fs {
        if f.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: f.dim() });
        }
    }
    let pairs = fs.len() - 1;
    let mut acc = fs[0].clone();
    let mut remainder = Some(0.0);
    let mut terminated = true;
    let mut orders_used = 0;
    for j in 1..fs.len() {
        let out = match cfg.mode {
            StarMode::ExactIfTerminating => star_pair_exact(&acc, &fs[j], theta)?,
            StarMode::FixedOrder(n) => star_pair_series(&acc, &fs[j], theta, Some(n), None, cfg.max_order)?,
            StarMode::Adaptive(eps) => {
                let growth: f64 = fs[j + 1..].iter().map(|f| f.l1_norm().max(1.0)).product();
                let target = eps / (pairs as f64 * growth);
                star_pair_series(&acc, &fs[j], theta, None, Some(target), cfg.max_order)?
            }
        };
        remainder = match (remainder, out.remainder) {
            (Some(prev), Some(r)) if prev == 0.0 => Some(r),
            (Some(prev), Some(r)) if fs[j].is_trigonometric() => Some(prev * fs[j].l1_norm() + r),
            _ => None,
        };
        terminated &= out.terminated;
        orders_used = orders_used.max(out.orders_used);
        acc = out.value;
    }
    if let (StarMode::Adaptive(eps), Some(r)) = (cfg.mode, remainder) {
        if r > eps {
            return Err(Error::RemainderAboveTolerance { order: orders_used, bound: r, tol: eps });
        }
    }
    Ok(StarResult { value: acc, terminated, orders_used, remainder_bound: remainder })
}

/// Exact two-factor product.
pub fn star(f: &Expr, g: &Expr, theta: &ThetaMatrix) -> Result<Expr> {
    Ok(star_product(&[f.clone(), g.clone()], theta, &StarConfig::exact())?.value)
}

/// `f ⋆ g - g ⋆ f`.
pub fn moyal_commutator(f: &Expr, g: &Expr, theta: &ThetaMatrix) -> Result<Expr> {
    star(f, g, theta)?.sub(&star(g, f, theta)?)
}
