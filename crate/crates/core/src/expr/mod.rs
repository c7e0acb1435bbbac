//! Exponential polynomials: finite sums of `c * x^alpha * e^{i k.x}`.
//!
//! This class is closed under differentiation and pointwise products, which
//! is everything the star-product series does to its factors. The pairing
//! `k.x` is the plain Euclidean one; no metric enters at this level.
//!
//! Canonical form: terms sorted by monomial exponents (lexicographic), then
//! by wave components (lexicographic), like keys merged, exact zeros dropped.
//! Waves closer than [`WAVE_TOL`] (relative) are treated as the same key so
//! that floating-point sums such as `k + (p + q)` and `(k + p) + q` merge.

mod domain;
mod format;
mod parse;

pub use domain::{box_integral, BoxDomain};
pub use parse::parse_expr;

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance under which two wave components are the same key.
pub const WAVE_TOL: f64 = 1e-12;

/// Absolute tolerance for symbolic equality of coefficients.
pub const COEFF_TOL: f64 = 1e-12;

/// Exponents of a monomial, one per coordinate axis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    /// `e_axis`, the unit multi-index.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut m = Self::zero(dim);
        m.0[axis] = 1;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// Plane-wave covector `k` of the factor `e^{i k.x}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Wave(Vec<f64>);

impl Wave {
    pub fn zero(dim: usize) -> Self {
        Wave(vec![0.0; dim])
    }

    pub fn new(components: Vec<f64>) -> Self {
        // -0.0 + 0.0 == +0.0, so ordering never sees a negative zero
        Wave(components.into_iter().map(|c| c + 0.0).collect())
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        self.0.iter().zip(x).map(|(k, x)| k * x).sum()
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub(crate) fn add(&self, other: &Wave) -> Wave {
        Wave::new(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub(crate) fn close_to(&self, other: &Wave) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| {
            a == b || (a - b).abs() <= WAVE_TOL * a.abs().max(b.abs()).max(1.0)
        })
    }

    fn cmp_total(&self, other: &Wave) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.total_cmp(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        Ordering::Equal
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    pub monomial: MultiIndex,
    pub wave: Wave,
}

impl Term {
    pub fn new(coeff: Complex64, monomial: MultiIndex, wave: Wave) -> Self {
        Term { coeff, monomial, wave }
    }

    fn key_cmp(&self, other: &Term) -> Ordering {
        self.monomial
            .cmp(&other.monomial)
            .then_with(|| self.wave.cmp_total(&other.wave))
    }

    fn value(&self, point: &[f64]) -> Complex64 {
        let mut mono = 1.0;
        for (&x, &e) in point.iter().zip(self.monomial.exponents()) {
            mono *= powu(x, e);
        }
        let phase = self.wave.dot(point);
        self.coeff * mono * Complex64::new(libm::cos(phase), libm::sin(phase))
    }
}

pub(crate) fn powu(x: f64, e: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// A canonical exponential polynomial over `dim` coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    dim: usize,
    terms: Vec<Term>,
}

impl Expr {
    pub fn zero(dim: usize) -> Self {
        Expr { dim, terms: Vec::new() }
    }

    pub fn constant(dim: usize, c: Complex64) -> Self {
        Self::from_terms(dim, vec![Term::new(c, MultiIndex::zero(dim), Wave::zero(dim))])
    }

    /// The coordinate function `x^axis`.
    pub fn coord(dim: usize, axis: usize) -> Result<Self> {
        if axis >= dim {
            return Err(Error::AxisOutOfRange { axis, dim });
        }
        Ok(Self::from_terms(
            dim,
            vec![Term::new(Complex64::new(1.0, 0.0), MultiIndex::unit(dim, axis), Wave::zero(dim))],
        ))
    }

    /// `e^{i k.x}`.
    pub fn plane_wave(k: &[f64]) -> Self {
        let dim = k.len();
        Self::from_terms(
            dim,
            vec![Term::new(Complex64::new(1.0, 0.0), MultiIndex::zero(dim), Wave::new(k.to_vec()))],
        )
    }

    /// Builds a canonical expression. Panics if a term's length differs
    /// from `dim`.
    pub fn from_terms(dim: usize, terms: Vec<Term>) -> Self {
        for t in &terms {
            assert!(
                t.monomial.dim() == dim && t.wave.0.len() == dim,
                "term dimension does not match expression dimension"
            );
        }
        Expr { dim, terms: canonicalize(terms) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total polynomial degree (0 for the zero expression).
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.monomial.degree()).max().unwrap_or(0)
    }

    /// Largest exponent along one axis.
    pub fn axis_degree(&self, axis: usize) -> u32 {
        self.terms.iter().map(|t| t.monomial.0[axis]).max().unwrap_or(0)
    }

    /// True when no term carries a plane-wave factor.
    pub fn is_polynomial(&self) -> bool {
        self.terms.iter().all(|t| t.wave.is_zero())
    }

    /// True when every term is a bare plane wave (no monomial factor).
    pub fn is_trigonometric(&self) -> bool {
        self.terms.iter().all(|t| t.monomial.is_zero())
    }

    /// Sum of absolute coefficients.
    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().fold(0.0, |s, t| s + t.coeff.norm())
    }

    /// Re-canonicalizes. Canonical input comes back unchanged.
    pub fn canonical(&self) -> Expr {
        Expr { dim: self.dim, terms: canonicalize(self.terms.clone()) }
    }

    fn check_dim(&self, other: &Expr) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        Ok(())
    }

    pub fn add(&self, other: &Expr) -> Result<Expr> {
        self.check_dim(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Expr { dim: self.dim, terms: canonicalize(terms) })
    }

    pub fn sub(&self, other: &Expr) -> Result<Expr> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Expr {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    pub fn scale(&self, c: Complex64) -> Expr {
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(t.coeff * c, t.monomial.clone(), t.wave.clone()))
            .collect();
        Expr { dim: self.dim, terms: canonicalize(terms) }
    }

    /// Complex conjugate: conjugates coefficients and flips waves.
    pub fn conj(&self) -> Expr {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let w = Wave::new(t.wave.0.iter().map(|k| -k).collect());
                Term::new(t.coeff.conj(), t.monomial.clone(), w)
            })
            .collect();
        Expr { dim: self.dim, terms: canonicalize(terms) }
    }

    /// Exact pointwise product.
    pub fn multiply(&self, other: &Expr) -> Result<Expr> {
        self.check_dim(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Term::new(
                    a.coeff * b.coeff,
                    a.monomial.add(&b.monomial),
                    a.wave.add(&b.wave),
                ));
            }
        }
        Ok(Expr { dim: self.dim, terms: canonicalize(terms) })
    }

    /// Product with all terms of total degree above `max_degree` discarded.
    pub fn multiply_truncated(&self, other: &Expr, max_degree: u32) -> Result<Expr> {
        self.check_dim(other)?;
        let mut terms = Vec::new();
        for a in &self.terms {
            let da = a.monomial.degree();
            for b in &other.terms {
                if da + b.monomial.degree() > max_degree {
                    continue;
                }
                terms.push(Term::new(
                    a.coeff * b.coeff,
                    a.monomial.add(&b.monomial),
                    a.wave.add(&b.wave),
                ));
            }
        }
        Ok(Expr { dim: self.dim, terms: canonicalize(terms) })
    }

    /// Drops terms of total degree above `max_degree`.
    pub fn truncate_degree(&self, max_degree: u32) -> Expr {
        let terms = self
            .terms
            .iter()
            .filter(|t| t.monomial.degree() <= max_degree)
            .cloned()
            .collect();
        Expr { dim: self.dim, terms }
    }

    /// Exact partial derivative along `axis`:
    /// `d(x^a e^{ikx}) = (a x^{a-e} + i k x^a) e^{ikx}`.
    pub fn differentiate(&self, axis: usize) -> Result<Expr> {
        if axis >= self.dim {
            return Err(Error::AxisOutOfRange { axis, dim: self.dim });
        }
        let mut terms = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            let a = t.monomial.0[axis];
            if a > 0 {
                let mut m = t.monomial.clone();
                m.0[axis] -= 1;
                terms.push(Term::new(t.coeff * a as f64, m, t.wave.clone()));
            }
            let k = t.wave.0[axis];
            if k != 0.0 {
                terms.push(Term::new(
                    t.coeff * Complex64::new(0.0, k),
                    t.monomial.clone(),
                    t.wave.clone(),
                ));
            }
        }
        Ok(Expr { dim: self.dim, terms: canonicalize(terms) })
    }

    /// Applies `d^alpha`.
    pub fn derivative(&self, alpha: &MultiIndex) -> Result<Expr> {
        if alpha.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: alpha.dim() });
        }
        let mut e = self.clone();
        for (axis, &n) in alpha.exponents().iter().enumerate() {
            for _ in 0..n {
                if e.is_zero() {
                    return Ok(e);
                }
                e = e.differentiate(axis)?;
            }
        }
        Ok(e)
    }

    pub fn evaluate(&self, point: &[f64]) -> Result<Complex64> {
        if point.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: point.len() });
        }
        Ok(self.terms.iter().map(|t| t.value(point)).sum())
    }

    /// Substitutes `x -> x + offset`.
    pub fn shift(&self, offset: &[f64]) -> Result<Expr> {
        if offset.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: offset.len() });
        }
        if offset.iter().all(|&a| a == 0.0) {
            return Ok(self.clone());
        }
        let d = self.dim;
        // (x_mu + a_mu) for every axis, raised on demand
        let mut result = Vec::new();
        for t in &self.terms {
            let phase = t.wave.dot(offset);
            let c = t.coeff * Complex64::new(libm::cos(phase), libm::sin(phase));
            let mut acc = Expr::from_terms(d, vec![Term::new(c, MultiIndex::zero(d), t.wave.clone())]);
            for (axis, &e) in t.monomial.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                acc = acc.multiply(&binomial_power(d, axis, offset[axis], e))?;
            }
            result.extend(acc.terms);
        }
        Ok(Expr { dim: d, terms: canonicalize(result) })
    }

    /// Substitutes `x -> M x` for a row-major `dim x dim` matrix `M`.
    /// Monomials expand; a wave `k` becomes `M^T k`.
    pub fn linear_substitute(&self, m: &[f64]) -> Result<Expr> {
        let d = self.dim;
        if m.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, found: m.len() });
        }
        // row mu of M as the linear form (M x)_mu
        let rows: Vec<Expr> = (0..d)
            .map(|mu| {
                let terms = (0..d)
                    .filter(|&nu| m[mu * d + nu] != 0.0)
                    .map(|nu| {
                        Term::new(
                            Complex64::new(m[mu * d + nu], 0.0),
                            MultiIndex::unit(d, nu),
                            Wave::zero(d),
                        )
                    })
                    .collect();
                Expr::from_terms(d, terms)
            })
            .collect();
        let mut result = Vec::new();
        for t in &self.terms {
            let w = Wave::new(crate::linalg::mat_t_vec(m, t.wave.components()));
            let mut acc = Expr::from_terms(d, vec![Term::new(t.coeff, MultiIndex::zero(d), w)]);
            for (mu, &e) in t.monomial.exponents().iter().enumerate() {
                for _ in 0..e {
                    acc = acc.multiply(&rows[mu])?;
                }
            }
            result.extend(acc.terms);
        }
        Ok(Expr { dim: d, terms: canonicalize(result) })
    }

    /// Places this expression on axes `offset..offset+dim` of a
    /// `total_dim`-dimensional space.
    pub fn embed(&self, total_dim: usize, offset: usize) -> Expr {
        assert!(offset + self.dim <= total_dim);
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut m = vec![0; total_dim];
                let mut w = vec![0.0; total_dim];
                m[offset..offset + self.dim].copy_from_slice(&t.monomial.0);
                w[offset..offset + self.dim].copy_from_slice(&t.wave.0);
                Term::new(t.coeff, MultiIndex(m), Wave(w))
            })
            .collect();
        Expr { dim: total_dim, terms }
    }

    /// Groups terms by plane wave: `self = sum_k P_k(x) e^{i k.x}` with each
    /// `P_k` a pure polynomial. Order follows the first occurrence of each
    /// wave in canonical order.
    pub fn split_by_wave(&self) -> Vec<(Wave, Expr)> {
        let d = self.dim;
        let mut groups: Vec<(Wave, Vec<Term>)> = Vec::new();
        for t in &self.terms {
            let poly_term = Term::new(t.coeff, t.monomial.clone(), Wave::zero(d));
            match groups.iter_mut().find(|(w, _)| w.close_to(&t.wave)) {
                Some((_, ts)) => ts.push(poly_term),
                None => groups.push((t.wave.clone(), vec![poly_term])),
            }
        }
        groups
            .into_iter()
            .map(|(w, ts)| (w, Expr::from_terms(d, ts)))
            .collect()
    }

    /// `self * e^{i k.x}`.
    pub fn times_wave(&self, k: &Wave) -> Expr {
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(t.coeff, t.monomial.clone(), t.wave.add(k)))
            .collect();
        Expr { dim: self.dim, terms: canonicalize(terms) }
    }

    /// Symbolic equality: every key's coefficients agree within `tol`.
    pub fn approx_eq(&self, other: &Expr, tol: f64) -> bool {
        match self.sub(other) {
            Ok(diff) => diff.terms.iter().all(|t| t.coeff.norm() <= tol),
            Err(_) => false,
        }
    }

    /// The constant coefficient (monomial 0, wave 0).
    pub fn constant_part(&self) -> Complex64 {
        self.terms
            .iter()
            .find(|t| t.monomial.is_zero() && t.wave.is_zero())
            .map(|t| t.coeff)
            .unwrap_or_default()
    }
}

impl core::fmt::Display for Expr {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&format::format_expr(self))
    }
}

pub use format::format_expr;

/// `(x_axis + a)^e` expanded binomially.
fn binomial_power(dim: usize, axis: usize, a: f64, e: u32) -> Expr {
    let mut terms = Vec::with_capacity(e as usize + 1);
    let mut binom = 1.0;
    for j in 0..=e {
        // C(e, j) x^j a^{e-j}
        let mut m = MultiIndex::zero(dim);
        m.0[axis] = j;
        terms.push(Term::new(Complex64::new(binom * powu(a, e - j), 0.0), m, Wave::zero(dim)));
        binom = binom * (e - j) as f64 / (j + 1) as f64;
    }
    Expr::from_terms(dim, terms)
}

fn canonicalize(mut terms: Vec<Term>) -> Vec<Term> {
    terms.retain(|t| t.coeff != Complex64::new(0.0, 0.0));
    terms.sort_by(Term::key_cmp);
    let mut out: Vec<Term> = Vec::with_capacity(terms.len());
    for t in terms {
        let mut merged = false;
        for o in out.iter_mut().rev() {
            if o.monomial != t.monomial {
                break;
            }
            if o.wave.close_to(&t.wave) {
                o.coeff += t.coeff;
                merged = true;
                break;
            }
        }
        if !merged {
            out.push(t);
        }
    }
    out.retain(|t| t.coeff != Complex64::new(0.0, 0.0));
    out
}
