//! Truncation study: Taylor-truncated test functions have terminating star
//! products, and their values should approach the untruncated product.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::{BoxDomain, Expr};
use crate::gaussian::GaussianTestFn;
use crate::gevrey::{self, GevreyBound};
use crate::star::star;
use crate::theta::ThetaMatrix;

#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    Gaussian(GaussianTestFn),
    Polynomial(Expr),
}

impl Generator {
    pub fn dim(&self) -> usize {
        match self {
            Generator::Gaussian(g) => g.dim(),
            Generator::Polynomial(e) => e.dim(),
        }
    }

    /// Degree-`k` truncation: Taylor polynomial about the center for a
    /// Gaussian, dropped high-degree terms for a polynomial.
    pub fn truncate(&self, k: u32) -> Result<Expr> {
        match self {
            Generator::Gaussian(g) => g.taylor_truncate(k),
            Generator::Polynomial(e) => Ok(e.truncate_degree(k)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceConfig {
    pub probe_points: Vec<Vec<f64>>,
    /// Box for integral probes; used with polynomial generators.
    pub domain: Option<BoxDomain>,
    /// Order of the pointwise reference series for Gaussian generators.
    pub oracle_order: usize,
    /// Largest acceptable remainder bound of the reference.
    pub reference_tol: f64,
}

impl ConvergenceConfig {
    pub fn with_probes(probe_points: Vec<Vec<f64>>) -> Self {
        ConvergenceConfig { probe_points, domain: None, oracle_order: 32, reference_tol: 1e-7 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceSeries {
    pub degrees: Vec<u32>,
    pub errors: Vec<f64>,
    /// Star-series tail bound after the same order, when one exists.
    pub tail_bounds: Vec<Option<f64>>,
    pub reference: String,
    /// Remainder bound of the reference values (0 when exact).
    pub reference_remainder: f64,
}

/// Minimum `k_max` for [`weak_convergence_study`].
pub const MIN_K_MAX: u32 = 4;

/// Errors `e_k` for `k = 0..=k_max`: the largest deviation of
/// `f_k ⋆ g_k` from the reference over the probe points and, for
/// polynomial generators with a box, the box integral.
pub fn weak_convergence_study(
    f: &Generator,
    g: &Generator,
    theta: &ThetaMatrix,
    k_max: u32,
    cfg: &ConvergenceConfig,
) -> Result<ConvergenceSeries> {
    if k_max < MIN_K_MAX {
        return Err(Error::InvalidConfig("k_max must be at least 4"));
    }
    let d = theta.dim();
    for gen in [f, g] {
        if gen.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: gen.dim() });
        }
    }
    if let Some(p) = cfg.probe_points.iter().find(|p| p.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: p.len() });
    }
    let (reference, values, integral, reference_remainder) = match (f, g) {
        (Generator::Polynomial(pf), Generator::Polynomial(pg)) => {
            let full = star(pf, pg, theta)?;
            let values = cfg.probe_points.iter().map(|x| full.evaluate(x)).collect::<Result<Vec<_>>>()?;
            let integral = cfg.domain.as_ref().map(|b| b.integrate(&full)).transpose()?;
            (String::from("exact star product of the untruncated generators"), values, integral, 0.0)
        }
        (Generator::Gaussian(gf), Generator::Gaussian(gg)) => {
            let scale = theta.pair_sum();
            let bound = GevreyBound::for_gaussian(gf)
                .zip(GevreyBound::for_gaussian(gg))
                .and_then(|(bf, bg)| gevrey::tail_bound(cfg.oracle_order, &bf, &bg, scale))
                .unwrap_or(f64::INFINITY);
            if !(bound <= cfg.reference_tol) {
                return Err(Error::ReferenceUnreliable { bound, tol: cfg.reference_tol });
            }
            let values = cfg
                .probe_points
                .iter()
                .map(|x| pointwise_star(gf, gg, theta, x, cfg.oracle_order))
                .collect::<Result<Vec<_>>>()?;
            let label = alloc::format!("pointwise star series of the generators to order {}", cfg.oracle_order);
            (label, values, None, bound)
        }
        _ => return Err(Error::InvalidConfig("generators must both be Gaussian or both polynomial")),
    };
    let bounds = match (f, g) {
        (Generator::Gaussian(gf), Generator::Gaussian(gg)) => GevreyBound::for_gaussian(gf).zip(GevreyBound::for_gaussian(gg)),
        _ => None,
    };
    let mut series = ConvergenceSeries {
        degrees: Vec::new(),
        errors: Vec::new(),
        tail_bounds: Vec::new(),
        reference,
        reference_remainder,
    };
    for k in 0..=k_max {
        let prod = star(&f.truncate(k)?, &g.truncate(k)?, theta)?;
        let mut err = 0.0f64;
        for (x, r) in cfg.probe_points.iter().zip(&values) {
            err = err.max((prod.evaluate(x)? - r).norm());
        }
        if let (Some(b), Some(r)) = (&cfg.domain, integral) {
            err = err.max((b.integrate(&prod)? - r).norm());
        }
        series.degrees.push(k);
        series.errors.push(err);
        series
            .tail_bounds
            .push(bounds.and_then(|(bf, bg)| gevrey::tail_bound(k as usize, &bf, &bg, theta.pair_sum())));
    }
    Ok(series)
}

/// `(f ⋆ g)(x)` to order `n` from derivatives at `x`:
/// `Σ_m Π_e ((i/2) θ_e)^{m_e} / m_e! · ∂^{a(m)} f(x) ∂^{b(m)} g(x)`, over
/// multiplicities `m_e` of the nonzero entries `e = (μ, ν)` with
/// `a = Σ m_e e_μ`, `b = Σ m_e e_ν`.
fn pointwise_star(f: &GaussianTestFn, g: &GaussianTestFn, theta: &ThetaMatrix, x: &[f64], n: usize) -> Result<Complex64> {
    let jf = jet_table(&f.local_jet(x, n as u32)?);
    let jg = jet_table(&g.local_jet(x, n as u32)?);
    let entries = theta.nonzero_entries();
    let d = theta.dim();
    let mut total = Complex64::new(0.0, 0.0);
    let mut m = alloc::vec![0usize; entries.len()];
    let mut walk = Walk { entries: &entries, jf: &jf, jg: &jg, d, total: &mut total };
    walk.visit(&mut m, 0, n);
    Ok(total)
}

/// Derivatives `∂^a h(x) = a! H_a` keyed by exponent.
fn jet_table(jet: &Expr) -> BTreeMap<Vec<u32>, Complex64> {
    jet.terms()
        .iter()
        .map(|t| {
            let fact: f64 = t.monomial.exponents().iter().map(|&e| factorial(e as usize)).product();
            (t.monomial.exponents().to_vec(), t.coeff * fact)
        })
        .collect()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

struct Walk<'a> {
    entries: &'a [(usize, usize, f64)],
    jf: &'a BTreeMap<Vec<u32>, Complex64>,
    jg: &'a BTreeMap<Vec<u32>, Complex64>,
    d: usize,
    total: &'a mut Complex64,
}

impl Walk<'_> {
    fn visit(&mut self, m: &mut Vec<usize>, slot: usize, budget: usize) {
        if slot == m.len() {
            self.accumulate(m);
            return;
        }
        for c in 0..=budget {
            m[slot] = c;
            self.visit(m, slot + 1, budget - c);
        }
        m[slot] = 0;
    }

    fn accumulate(&mut self, m: &[usize]) {
        let mut a = alloc::vec![0u32; self.d];
        let mut b = alloc::vec![0u32; self.d];
        let mut coeff = Complex64::new(1.0, 0.0);
        for (&(mu, nu, th), &c) in self.entries.iter().zip(m) {
            a[mu] += c as u32;
            b[nu] += c as u32;
            coeff *= Complex64::new(0.0, 0.5 * th).powu(c as u32) / factorial(c);
        }
        let zero = Complex64::new(0.0, 0.0);
        let fa = self.jf.get(&a).copied().unwrap_or(zero);
        let gb = self.jg.get(&b).copied().unwrap_or(zero);
        *self.total += coeff * fa * gb;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use alloc::vec;

    fn tilted(c: [f64; 2], s: f64, t: [f64; 2]) -> GaussianTestFn {
        GaussianTestFn::new(c.to_vec(), vec![s, s], t.to_vec(), Expr::constant(2, Complex64::new(1.0, 0.0))).unwrap()
    }

    fn probes() -> Vec<Vec<f64>> {
        vec![vec![0.0, 0.0], vec![0.3, -0.2], vec![-0.25, 0.4]]
    }

    #[test]
    fn pointwise_reference_is_consistent() {
        let theta = ThetaMatrix::planar(0.5).unwrap();
        let f = tilted([0.3, 0.1], 1.5, [0.4, 0.0]);
        let g = tilted([-0.2, 0.2], 1.5, [0.0, 0.4]);
        let x = [0.1, -0.1];
        let lo = pointwise_star(&f, &g, &theta, &x, 24).unwrap();
        let hi = pointwise_star(&f, &g, &theta, &x, 32).unwrap();
        assert!((lo - hi).norm() < 1e-9);
        // θ = 0: the plain product
        let z = pointwise_star(&f, &g, &ThetaMatrix::zero(2), &x, 8).unwrap();
        assert!((z - f.value(&x).unwrap() * g.value(&x).unwrap()).norm() < 1e-15);
        // the deformation is visible at this scale
        let plain = f.value(&x).unwrap() * g.value(&x).unwrap();
        assert!((hi - plain).norm() > 1e-3);
    }

    #[test]
    fn gaussian_generators_converge() {
        let theta = ThetaMatrix::planar(0.5).unwrap();
        let f = Generator::Gaussian(tilted([0.0, 0.0], 1.5, [0.4, 0.0]));
        let g = Generator::Gaussian(tilted([0.1, 0.0], 1.5, [0.0, 0.4]));
        let s = weak_convergence_study(&f, &g, &theta, 16, &ConvergenceConfig::with_probes(probes())).unwrap();
        assert_eq!(s.degrees, (0..=16).collect::<Vec<_>>());
        assert!(s.errors[16] < 1e-6, "{:?}", s.errors);
        assert!(s.errors[6..].windows(2).all(|w| w[1] < w[0]), "{:?}", s.errors);
        assert!(s.reference_remainder <= 1e-7);
        for (e, b) in s.errors.iter().zip(&s.tail_bounds) {
            assert!(*e <= b.unwrap());
        }
    }

    #[test]
    fn polynomial_generators_are_exact_past_their_degree() {
        let theta = ThetaMatrix::planar(0.5).unwrap();
        let f = Generator::Polynomial(parse_expr("x0^3 - 2*x0*x1 + 0.5*x1^2 + 1", 2).unwrap());
        let g = Generator::Polynomial(parse_expr("x1^3 + x0^2*x1 - x0", 2).unwrap());
        let mut cfg = ConvergenceConfig::with_probes(probes());
        cfg.domain = Some(BoxDomain::cube(2, 1.5).unwrap());
        let s = weak_convergence_study(&f, &g, &theta, 6, &cfg).unwrap();
        assert!(s.errors[3..].iter().all(|&e| e == 0.0), "{:?}", s.errors);
        assert!(s.errors[2] > 0.0);
    }

    #[test]
    fn commutative_limit() {
        let f = Generator::Gaussian(tilted([0.0, 0.0], 1.5, [0.4, 0.0]));
        let g = Generator::Gaussian(tilted([0.1, 0.0], 1.5, [0.0, 0.4]));
        let s = weak_convergence_study(&f, &g, &ThetaMatrix::zero(2), 12, &ConvergenceConfig::with_probes(probes())).unwrap();
        assert!(s.errors[12] < 1e-8);
        assert!(s.tail_bounds.iter().all(|b| *b == Some(0.0)));
    }

    #[test]
    fn rejects_bad_input() {
        let theta = ThetaMatrix::planar(0.5).unwrap();
        let f = Generator::Gaussian(tilted([0.0, 0.0], 1.5, [0.4, 0.0]));
        let cfg = ConvergenceConfig::with_probes(probes());
        assert!(matches!(weak_convergence_study(&f, &f, &theta, 3, &cfg), Err(Error::InvalidConfig(_))));
        // narrow Gaussians make the reference series useless
        let narrow = Generator::Gaussian(tilted([0.0, 0.0], 0.2, [0.0, 0.0]));
        assert!(matches!(weak_convergence_study(&narrow, &narrow, &theta, 4, &cfg), Err(Error::ReferenceUnreliable { .. })));
        let p = Generator::Polynomial(parse_expr("x0", 2).unwrap());
        assert!(weak_convergence_study(&f, &p, &theta, 4, &cfg).is_err());
    }
}
