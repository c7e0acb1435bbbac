//! Free scalar field on the commuting `(x0, x3)` plane.
//!
//! Coordinates of the plane are stored as `[x0, x3]`; the pairing is
//! `p.x = p0 x0 - p3 x3` and `F(p) = ∫ f(x) e^{i p.x} d²x`. Smeared two-point
//! values are one-dimensional integrals over the mass shell.

pub mod quadrature;

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::BoxDomain;
use crate::expr::Expr;
use crate::gaussian::GaussianTestFn;
use crate::linalg;
use crate::star::{star_product, StarConfig};
use crate::theta::ThetaMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSpec {
    mass: f64,
}

impl FieldSpec {
    pub fn new(mass: f64) -> Result<Self> {
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::InvalidMass(mass));
        }
        Ok(FieldSpec { mass })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega(&self, k: f64) -> f64 {
        libm::sqrt(k * k + self.mass * self.mass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Fixed momentum cutoff; `None` sizes it from the Gaussian tails.
    pub cutoff: Option<f64>,
    pub nodes_per_unit: usize,
    pub tail_tol: f64,
    /// Largest cutoff tried in adaptive mode.
    pub max_cutoff: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { cutoff: None, nodes_per_unit: 16, tail_tol: 1e-13, max_cutoff: 1e4 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(k) = self.cutoff {
            if !(k > 0.0) || !k.is_finite() {
                return Err(Error::InvalidConfig("cutoff must be positive"));
            }
        }
        if self.nodes_per_unit == 0 {
            return Err(Error::InvalidConfig("nodes per unit must be positive"));
        }
        if !(self.tail_tol > 0.0) {
            return Err(Error::InvalidConfig("tail tolerance must be positive"));
        }
        if !(self.max_cutoff > 0.0) {
            return Err(Error::InvalidConfig("cutoff cap must be positive"));
        }
        Ok(())
    }
}

/// Mass-shell nodes `k_j` with weights already divided by `4 pi omega_j`.
struct ShellRule {
    nodes: Vec<(f64, f64, f64)>,
}

fn check_plane(f: &GaussianTestFn) -> Result<()> {
    if f.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: f.dim() });
    }
    Ok(())
}

/// `F(omega, k)` under the Minkowski pairing.
pub fn minkowski_fourier(f: &GaussianTestFn, p0: f64, p3: f64) -> Complex64 {
    f.fourier(&[p0, -p3])
}

/// Estimated `∫_{|k|>K}` of the phase-free integrand for the pair.
fn tail_estimate(f: &GaussianTestFn, g: &GaussianTestFn, spec: &FieldSpec, cutoff: f64) -> Option<f64> {
    let lf = linalg::min_eigen_lower_bound(f.covariance(), 2)?;
    let lg = linalg::min_eigen_lower_bound(g.covariance(), 2)?;
    let a = lf + lg;
    let t = f.tilt().iter().chain(g.tilt()).fold(0.0f64, |m, v| m.max(v.abs()));
    let deg = (f.prefactor().degree() + g.prefactor().degree()) as f64;
    let rate = 2.0 * a * (cutoff - t) - deg / cutoff;
    if cutoff <= t || rate <= 0.0 {
        return None;
    }
    let h = |k: f64| {
        let w = spec.omega(k);
        f.fourier_envelope(&[w, -k]) * g.fourier_envelope(&[w, -k]) / (4.0 * PI * w)
    };
    Some((h(cutoff) + h(-cutoff)) / rate)
}

fn shell_rule(f: &GaussianTestFn, g: &GaussianTestFn, spec: &FieldSpec, q: &QuadratureConfig) -> Result<ShellRule> {
    q.validate()?;
    check_plane(f)?;
    check_plane(g)?;
    let cutoff = match q.cutoff {
        Some(k) => {
            let tail = tail_estimate(f, g, spec, k).unwrap_or(f64::INFINITY);
            if !(tail < q.tail_tol) {
                return Err(Error::TailUnattainable { cutoff: k, tail });
            }
            k
        }
        None => {
            let lf = linalg::min_eigen_lower_bound(f.covariance(), 2).unwrap_or(0.0);
            let lg = linalg::min_eigen_lower_bound(g.covariance(), 2).unwrap_or(0.0);
            let t = f.tilt().iter().chain(g.tilt()).fold(0.0f64, |m, v| m.max(v.abs()));
            let mut k = t + 1.0 / libm::sqrt((lf + lg).max(f64::MIN_POSITIVE));
            loop {
                let tail = tail_estimate(f, g, spec, k).unwrap_or(f64::INFINITY);
                if tail < q.tail_tol {
                    break k;
                }
                if k >= q.max_cutoff {
                    return Err(Error::TailUnattainable { cutoff: k, tail });
                }
                k = (k * 1.25).min(q.max_cutoff);
            }
        }
    };
    let per_panel = quadrature::PANEL_POINTS as f64 / q.nodes_per_unit as f64;
    let panels = libm::ceil(2.0 * cutoff / per_panel).max(1.0) as usize;
    let nodes = quadrature::composite_rule(cutoff, panels)
        .into_iter()
        .map(|(k, w)| {
            let om = spec.omega(k);
            (k, w / (4.0 * PI * om), om)
        })
        .collect();
    Ok(ShellRule { nodes })
}

/// `W(f, g) = ∫ dk / (2 pi 2 omega) conj(F(omega,k)) G(omega,k)`.
pub fn smeared_two_point(f: &GaussianTestFn, g: &GaussianTestFn, spec: &FieldSpec, q: &QuadratureConfig) -> Result<Complex64> {
    let rule = shell_rule(f, g, spec, q)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for &(k, w, om) in &rule.nodes {
        sum += minkowski_fourier(f, om, k).conj() * minkowski_fourier(g, om, k) * w;
    }
    Ok(sum)
}

/// `W(f, f_a)` for every shift `a = [a0, a3]`, where `f_a(x) = f(x - a)`,
/// sharing one set of transforms.
pub fn two_point_translates(f: &GaussianTestFn, shifts: &[[f64; 2]], spec: &FieldSpec, q: &QuadratureConfig) -> Result<Vec<Complex64>> {
    let rule = shell_rule(f, f, spec, q)?;
    let dens: Vec<(f64, f64, f64)> = rule
        .nodes
        .iter()
        .map(|&(k, w, om)| (k, om, w * minkowski_fourier(f, om, k).norm_sqr()))
        .collect();
    Ok(shifts
        .iter()
        .map(|a| {
            let mut s = Complex64::new(0.0, 0.0);
            for &(k, om, d) in &dens {
                let ph = om * a[0] - k * a[1];
                s += Complex64::new(libm::cos(ph), libm::sin(ph)) * d;
            }
            s
        })
        .collect())
}

/// Free-field n-point value from Wick pairings, `n <= 4`.
pub fn wick_npoint(fs: &[GaussianTestFn], spec: &FieldSpec, q: &QuadratureConfig) -> Result<Complex64> {
    let w = |i: usize, j: usize| smeared_two_point(&fs[i], &fs[j], spec, q);
    match fs.len() {
        0 => Ok(Complex64::new(1.0, 0.0)),
        1 | 3 => {
            for f in fs {
                check_plane(f)?;
            }
            Ok(Complex64::new(0.0, 0.0))
        }
        2 => w(0, 1),
        4 => Ok(w(0, 1)? * w(2, 3)? + w(0, 2)? * w(1, 3)? + w(0, 3)? * w(1, 2)?),
        n => Err(Error::TooManyPoints(n)),
    }
}

/// Dependence of a smearing function on the noncommuting axes `(x1, x2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NCFactor {
    expr: Expr,
    domain: BoxDomain,
}

impl NCFactor {
    pub fn new(expr: Expr, domain: BoxDomain) -> Result<Self> {
        if expr.dim() != 2 || domain.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: if expr.dim() != 2 { expr.dim() } else { domain.dim() } });
        }
        for t in expr.terms() {
            for (axis, &k) in t.wave.components().iter().enumerate() {
                if domain.harmonic(axis, k).is_none() {
                    return Err(Error::NotBoxCompatible { axis, wave: k, side: domain.side_lengths()[axis] });
                }
            }
        }
        Ok(NCFactor { expr, domain })
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }
}

/// The `(x1, x2)` block of a noncommutativity matrix, as a planar matrix.
/// Accepts a 2x2 matrix as is, or a 4x4 matrix whose only entries are
/// `θ^{12} = -θ^{21}`.
pub fn noncommuting_block(theta: &ThetaMatrix) -> Result<ThetaMatrix> {
    match theta.dim() {
        2 => Ok(theta.clone()),
        4 if theta.nonzero_entries().iter().all(|&(mu, nu, _)| matches!((mu, nu), (1, 2) | (2, 1))) => ThetaMatrix::planar(theta.get(1, 2)),
        _ => Err(Error::InvalidConfig("only the space-space block may be noncommutative")),
    }
}

/// Factorized deformed n-point value:
/// `W(commuting) * ∫_box nc_1 ⋆ ... ⋆ nc_n`.
///
/// The ⋆ links the noncommuting factors of consecutive smearing variables
/// in argument order.
pub fn star_smeared_npoint(
    commuting: &[GaussianTestFn],
    nc: &[NCFactor],
    theta: &ThetaMatrix,
    spec: &FieldSpec,
    q: &QuadratureConfig,
) -> Result<Complex64> {
    if commuting.len() != nc.len() {
        return Err(Error::LengthMismatch { left: commuting.len(), right: nc.len() });
    }
    if nc.is_empty() {
        return Err(Error::TooFewFactors);
    }
    if nc.len() > 4 {
        return Err(Error::TooManyPoints(nc.len()));
    }
    let domain = nc[0].domain();
    if nc.iter().any(|f| f.domain() != domain) {
        return Err(Error::BoxMismatch);
    }
    let block = noncommuting_block(theta)?;
    let w = wick_npoint(commuting, spec, q)?;
    let product = if nc.len() == 1 {
        nc[0].expr().clone()
    } else {
        let exprs: Vec<Expr> = nc.iter().map(|f| f.expr().clone()).collect();
        star_product(&exprs, &block, &StarConfig::exact())?.value
    };
    Ok(w * domain.integrate(&product)?)
}
