//! Gaussian test functions
//! `g(x) = P(x) exp(-1/2 (x-c)^T A (x-c)) e^{i t.x}`
//! with `A` symmetric positive definite (`A = diag(1/sigma^2)` for the
//! axis-aligned constructor) and `P` a polynomial prefactor.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::{Expr, MultiIndex, Term, Wave};
use crate::linalg;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianTestFn {
    center: Vec<f64>,
    precision: Vec<f64>,
    tilt: Vec<f64>,
    prefactor: Expr,
    covariance: Vec<f64>,
    // (2 pi)^{d/2} / sqrt(det A)
    norm: f64,
    // Fourier polynomial H with  ĝ(s) = H(s) * norm * exp(i s.c - s^T Σ s / 2)
    fourier_poly: Expr,
}

impl GaussianTestFn {
    /// Axis-aligned Gaussian with widths `sigma`.
    pub fn new(center: Vec<f64>, sigma: Vec<f64>, tilt: Vec<f64>, prefactor: Expr) -> Result<Self> {
        let d = center.len();
        if sigma.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: sigma.len() });
        }
        if sigma.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
            return Err(Error::InvalidGaussian("every width must be positive and finite"));
        }
        let mut precision = vec![0.0; d * d];
        for (i, s) in sigma.iter().enumerate() {
            precision[i * d + i] = 1.0 / (s * s);
        }
        Self::with_precision(center, precision, tilt, prefactor)
    }

    /// Unit prefactor, no tilt.
    pub fn plain(center: Vec<f64>, sigma: Vec<f64>) -> Result<Self> {
        let d = center.len();
        Self::new(center, sigma, vec![0.0; d], Expr::constant(d, Complex64::new(1.0, 0.0)))
    }

    /// General precision matrix `A` (row-major).
    pub fn with_precision(center: Vec<f64>, precision: Vec<f64>, tilt: Vec<f64>, prefactor: Expr) -> Result<Self> {
        let d = center.len();
        if d == 0 {
            return Err(Error::InvalidGaussian("dimension must be at least 1"));
        }
        if tilt.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: tilt.len() });
        }
        if precision.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, found: precision.len() });
        }
        if prefactor.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: prefactor.dim() });
        }
        if !prefactor.is_polynomial() {
            return Err(Error::NotPolynomial);
        }
        if center.iter().chain(&tilt).any(|v| !v.is_finite()) {
            return Err(Error::InvalidGaussian("center and tilt must be finite"));
        }
        if !linalg::is_symmetric_positive_definite(&precision, d) {
            return Err(Error::InvalidGaussian("precision matrix must be symmetric positive definite"));
        }
        let (covariance, det) =
            linalg::inverse_det(&precision, d).ok_or(Error::InvalidGaussian("singular precision"))?;
        let norm = libm::pow(2.0 * PI, d as f64 / 2.0) / libm::sqrt(det);
        let fourier_poly = fourier_polynomial(&prefactor, &center, &covariance)?;
        Ok(GaussianTestFn { center, precision, tilt, prefactor, covariance, norm, fourier_poly })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn precision(&self) -> &[f64] {
        &self.precision
    }

    pub fn covariance(&self) -> &[f64] {
        &self.covariance
    }

    pub fn tilt(&self) -> &[f64] {
        &self.tilt
    }

    pub fn prefactor(&self) -> &Expr {
        &self.prefactor
    }

    /// Per-axis widths when the precision matrix is diagonal.
    pub fn sigma(&self) -> Option<Vec<f64>> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                if i != j && self.precision[i * d + j] != 0.0 {
                    return None;
                }
            }
        }
        Some((0..d).map(|i| 1.0 / libm::sqrt(self.precision[i * d + i])).collect())
    }

    /// Complex exponent `Q(x) = -1/2 (x-c)^T A (x-c) + i t.x`.
    fn exponent(&self, x: &[f64]) -> Complex64 {
        let d = self.dim();
        let u: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        let au = linalg::mat_vec(&self.precision, &u);
        let quad: f64 = (0..d).map(|i| u[i] * au[i]).sum();
        let lin: f64 = (0..d).map(|i| self.tilt[i] * x[i]).sum();
        Complex64::new(-0.5 * quad, lin)
    }

    pub fn value(&self, x: &[f64]) -> Result<Complex64> {
        let p = self.prefactor.evaluate(x)?;
        Ok(p * self.exponent(x).exp())
    }

    /// Euclidean Fourier transform `∫ g(x) e^{i q.x} dx`, closed form.
    pub fn fourier(&self, q: &[f64]) -> Complex64 {
        let d = self.dim();
        let s: Vec<f64> = q.iter().zip(&self.tilt).map(|(a, b)| a + b).collect();
        let cs = linalg::mat_vec(&self.covariance, &s);
        let quad: f64 = (0..d).map(|i| s[i] * cs[i]).sum();
        let lin: f64 = (0..d).map(|i| s[i] * self.center[i]).sum();
        let h = self.fourier_poly.evaluate(&s).expect("dimension checked");
        h * self.norm * Complex64::new(-0.5 * quad, lin).exp()
    }

    /// Upper bound on `|ĝ(q - t)|` without the oscillating phase, used to
    /// size momentum cutoffs.
    pub fn fourier_envelope(&self, q: &[f64]) -> f64 {
        let d = self.dim();
        let s: Vec<f64> = q.iter().zip(&self.tilt).map(|(a, b)| a + b).collect();
        let cs = linalg::mat_vec(&self.covariance, &s);
        let quad: f64 = (0..d).map(|i| s[i] * cs[i]).sum();
        let mut poly = 0.0;
        for t in self.fourier_poly.terms() {
            let mut m = t.coeff.norm();
            for (v, &e) in s.iter().zip(t.monomial.exponents()) {
                m *= libm::pow(v.abs(), e as f64);
            }
            poly += m;
        }
        poly * self.norm * libm::exp(-0.5 * quad)
    }

    /// Local Taylor jet: the degree-`k` Taylor polynomial of
    /// `u -> g(point + u)` in the displacement variables `u`.
    pub fn local_jet(&self, point: &[f64], k: u32) -> Result<Expr> {
        let d = self.dim();
        if point.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: point.len() });
        }
        let u0: Vec<f64> = point.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        let au0 = linalg::mat_vec(&self.precision, &u0);
        // R(u) = grad Q(point).u - 1/2 u^T A u
        let mut r_terms = Vec::new();
        for mu in 0..d {
            let g = Complex64::new(-au0[mu], self.tilt[mu]);
            r_terms.push(Term::new(g, MultiIndex::unit(d, mu), Wave::zero(d)));
            for nu in 0..d {
                let a = self.precision[mu * d + nu];
                if a == 0.0 {
                    continue;
                }
                let mut m = MultiIndex::unit(d, mu).exponents().to_vec();
                m[nu] += 1;
                r_terms.push(Term::new(Complex64::new(-0.5 * a, 0.0), MultiIndex::new(m), Wave::zero(d)));
            }
        }
        let r = Expr::from_terms(d, r_terms);
        let one = Expr::constant(d, Complex64::new(1.0, 0.0));
        let mut series = one.clone();
        let mut power = one;
        for j in 1..=k {
            power = power.multiply_truncated(&r, k)?.scale(Complex64::new(1.0 / j as f64, 0.0));
            if power.is_zero() {
                break;
            }
            series = series.add(&power)?;
        }
        let local_prefactor = self.prefactor.shift(point)?;
        let base = self.exponent(point).exp();
        Ok(local_prefactor.multiply_truncated(&series, k)?.scale(base))
    }

    /// Degree-`k` Taylor polynomial about an arbitrary point, in the
    /// original coordinates.
    pub fn taylor_at(&self, point: &[f64], k: u32) -> Result<Expr> {
        let neg: Vec<f64> = point.iter().map(|v| -v).collect();
        self.local_jet(point, k)?.shift(&neg)
    }

    /// Degree-`k` Taylor polynomial about the center. Every derivative of
    /// order above `k` of the result vanishes identically.
    pub fn taylor_truncate(&self, k: u32) -> Result<Expr> {
        let c = self.center.clone();
        self.taylor_at(&c, k)
    }

    /// `x -> g(x - a)`.
    pub fn translated(&self, a: &[f64]) -> Result<Self> {
        let d = self.dim();
        if a.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: a.len() });
        }
        let center = self.center.iter().zip(a).map(|(c, s)| c + s).collect();
        let neg: Vec<f64> = a.iter().map(|v| -v).collect();
        let phase: f64 = self.tilt.iter().zip(a).map(|(t, s)| t * s).sum();
        let prefactor = self
            .prefactor
            .shift(&neg)?
            .scale(Complex64::new(libm::cos(phase), -libm::sin(phase)));
        Self::with_precision(center, self.precision.clone(), self.tilt.clone(), prefactor)
    }

    /// Push-forward `x -> g(M^{-1} x)` for an invertible `M` given with its
    /// inverse.
    pub fn transformed(&self, m: &[f64], m_inv: &[f64]) -> Result<Self> {
        let d = self.dim();
        if m.len() != d * d || m_inv.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, found: m.len() });
        }
        let center = linalg::mat_vec(m, &self.center);
        let precision = linalg::congruence(&self.precision, m_inv, d);
        let tilt = linalg::mat_t_vec(m_inv, &self.tilt);
        let prefactor = self.prefactor.linear_substitute(m_inv)?;
        Self::with_precision(center, precision, tilt, prefactor)
    }

    /// Boost by `rapidity` in the plane of axes 0 and 1 of a 2D function.
    pub fn boosted(&self, rapidity: f64) -> Result<Self> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: self.dim() });
        }
        let (ch, sh) = (libm::cosh(rapidity), libm::sinh(rapidity));
        self.transformed(&[ch, sh, sh, ch], &[ch, -sh, -sh, ch])
    }
}

/// `H_P = sum_alpha a_alpha H_alpha` with `H_0 = 1` and
/// `H_{alpha + e_mu} = -i (d_mu H_alpha + H_alpha L_mu)`,
/// `L_mu(s) = i c_mu - (Σ s)_mu`.
fn fourier_polynomial(prefactor: &Expr, center: &[f64], covariance: &[f64]) -> Result<Expr> {
    let d = center.len();
    let l: Vec<Expr> = (0..d)
        .map(|mu| {
            let mut terms = vec![Term::new(Complex64::new(0.0, center[mu]), MultiIndex::zero(d), Wave::zero(d))];
            for nu in 0..d {
                let s = covariance[mu * d + nu];
                if s != 0.0 {
                    terms.push(Term::new(Complex64::new(-s, 0.0), MultiIndex::unit(d, nu), Wave::zero(d)));
                }
            }
            Expr::from_terms(d, terms)
        })
        .collect();
    let minus_i = Complex64::new(0.0, -1.0);
    let mut total = Expr::zero(d);
    for t in prefactor.terms() {
        let mut h = Expr::constant(d, t.coeff);
        for (mu, &e) in t.monomial.exponents().iter().enumerate() {
            for _ in 0..e {
                h = h.differentiate(mu)?.add(&h.multiply(&l[mu])?)?.scale(minus_i);
            }
        }
        total = total.add(&h)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn gauss_1d(sigma: f64) -> GaussianTestFn {
        GaussianTestFn::plain(vec![0.0], vec![sigma]).unwrap()
    }

    #[test]
    fn taylor_of_unit_gaussian() {
        // e^{-x^2} has sigma^2 = 1/2
        let g = gauss_1d(libm::sqrt(0.5));
        assert!(g.taylor_truncate(2).unwrap().approx_eq(&parse_expr("1 - x0^2", 1).unwrap(), 1e-14));
        assert!(g
            .taylor_truncate(4)
            .unwrap()
            .approx_eq(&parse_expr("1 - x0^2 + 0.5*x0^4", 1).unwrap(), 1e-14));
    }

    #[test]
    fn truncation_law() {
        let g = GaussianTestFn::new(
            vec![0.3, -0.2],
            vec![0.8, 1.3],
            vec![0.5, -1.0],
            parse_expr("1 + x0*x1", 2).unwrap(),
        )
        .unwrap();
        for k in 0..7 {
            let t = g.taylor_truncate(k).unwrap();
            assert!(t.is_polynomial() && t.degree() <= k);
            for axis in 0..2 {
                let mut e = t.clone();
                for _ in 0..=k {
                    e = e.differentiate(axis).unwrap();
                }
                assert!(e.is_zero());
            }
        }
    }

    #[test]
    fn taylor_converges_to_value() {
        let g = GaussianTestFn::new(vec![0.1, 0.0], vec![1.0, 1.5], vec![0.7, 0.2], parse_expr("2 - x1", 2).unwrap())
            .unwrap();
        let x = [0.5, -0.4];
        let exact = g.value(&x).unwrap();
        let approx = g.taylor_truncate(24).unwrap().evaluate(&x).unwrap();
        assert!((exact - approx).norm() < 1e-12);
        // expansion about another point agrees as well
        let approx = g.taylor_at(&[0.4, -0.3], 16).unwrap().evaluate(&x).unwrap();
        assert!((exact - approx).norm() < 1e-12);
    }

    /// Riemann sum on a wide grid, independent of the closed form.
    fn numeric_fourier(g: &GaussianTestFn, q: &[f64]) -> Complex64 {
        let h = 0.05;
        let n = 240;
        let mut acc = Complex64::new(0.0, 0.0);
        for i in -n..=n {
            for j in -n..=n {
                let x = [g.center()[0] + i as f64 * h, g.center()[1] + j as f64 * h];
                let ph = q[0] * x[0] + q[1] * x[1];
                acc += g.value(&x).unwrap() * Complex64::new(0.0, ph).exp();
            }
        }
        acc * h * h
    }

    #[test]
    fn fourier_matches_quadrature() {
        let pre = parse_expr("1 + 0.5*x0 - x0*x1^2", 2).unwrap();
        let g = GaussianTestFn::with_precision(vec![0.2, -0.1], vec![2.0, 0.6, 0.6, 1.5], vec![0.3, -0.4], pre)
            .unwrap();
        for q in [[0.0, 0.0], [1.0, -0.5], [-0.7, 2.0]] {
            let a = g.fourier(&q);
            let b = numeric_fourier(&g, &q);
            assert!((a - b).norm() < 1e-8, "q={q:?}: {a} vs {b}");
            assert!(a.norm() <= g.fourier_envelope(&q) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn translation_and_boost_are_push_forwards() {
        let g = GaussianTestFn::new(vec![0.2, 0.1], vec![0.7, 0.9], vec![0.4, -0.3], parse_expr("1 + x0", 2).unwrap())
            .unwrap();
        let a = [0.5, -1.2];
        let t = g.translated(&a).unwrap();
        let x = [0.9, -0.8];
        let back = [x[0] - a[0], x[1] - a[1]];
        assert!((t.value(&x).unwrap() - g.value(&back).unwrap()).norm() < 1e-14);

        let chi: f64 = 0.6;
        let b = g.boosted(chi).unwrap();
        let (ch, sh) = (libm::cosh(chi), libm::sinh(chi));
        let pre = [ch * x[0] - sh * x[1], -sh * x[0] + ch * x[1]];
        assert!((b.value(&x).unwrap() - g.value(&pre).unwrap()).norm() < 1e-13);
    }

    #[test]
    fn boosts_compose() {
        let g = GaussianTestFn::new(vec![0.2, 0.1], vec![0.7, 0.9], vec![0.4, -0.3], parse_expr("1 + x1^2", 2).unwrap())
            .unwrap();
        let once = g.boosted(0.3).unwrap().boosted(0.45).unwrap();
        let direct = g.boosted(0.75).unwrap();
        for (a, b) in once.center().iter().zip(direct.center()) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in once.precision().iter().zip(direct.precision()) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in once.tilt().iter().zip(direct.tilt()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(once.prefactor().approx_eq(direct.prefactor(), 1e-12));
        assert_eq!(g.boosted(0.0).unwrap(), g);
    }

    #[test]
    fn rejects_bad_widths() {
        assert!(GaussianTestFn::plain(vec![0.0], vec![0.0]).is_err());
        assert!(GaussianTestFn::plain(vec![0.0, 0.0], vec![1.0]).is_err());
        let pw = parse_expr("pw(1)", 1).unwrap();
        assert_eq!(
            GaussianTestFn::new(vec![0.0], vec![1.0], vec![0.0], pw),
            Err(Error::NotPolynomial)
        );
    }
}
