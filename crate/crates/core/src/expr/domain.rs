use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::Expr;
use crate::error::{Error, Result};

/// Periodic integration box `[0, L_0] x ... x [0, L_{d-1}]`.
///
/// A wave is compatible when every component is an integer multiple of
/// `2 pi / L_mu`; only those integrate in closed form here.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxDomain {
    side_lengths: Vec<f64>,
}

/// Relative slack for deciding that `k L / 2 pi` is an integer.
const HARMONIC_TOL: f64 = 1e-9;

impl BoxDomain {
    pub fn new(side_lengths: Vec<f64>) -> Result<Self> {
        if side_lengths.is_empty() || side_lengths.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
            return Err(Error::InvalidBox);
        }
        Ok(BoxDomain { side_lengths })
    }

    /// Cube with equal sides.
    pub fn cube(dim: usize, side: f64) -> Result<Self> {
        Self::new(alloc::vec![side; dim])
    }

    pub fn side_lengths(&self) -> &[f64] {
        &self.side_lengths
    }

    pub fn dim(&self) -> usize {
        self.side_lengths.len()
    }

    /// Harmonic number `n` with `k = 2 pi n / L`, if any.
    pub fn harmonic(&self, axis: usize, k: f64) -> Option<i64> {
        let l = self.side_lengths[axis];
        let x = k * l / (2.0 * PI);
        let n = libm::round(x);
        ((x - n).abs() <= HARMONIC_TOL * n.abs().max(1.0)).then_some(n as i64)
    }

    pub fn is_compatible(&self, wave: &[f64]) -> bool {
        wave.iter().enumerate().all(|(axis, &k)| self.harmonic(axis, k).is_some())
    }

    /// Exact `∫_box e(x) dx`, axis by axis.
    pub fn integrate(&self, e: &Expr) -> Result<Complex64> {
        if e.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: e.dim() });
        }
        let mut total = Complex64::new(0.0, 0.0);
        for t in e.terms() {
            let mut v = t.coeff;
            for axis in 0..self.dim() {
                let k = t.wave.components()[axis];
                let l = self.side_lengths[axis];
                let n = self.harmonic(axis, k).ok_or(Error::NotBoxCompatible { axis, wave: k, side: l })?;
                v *= axis_integral(t.monomial.exponents()[axis], n, l);
                if v == Complex64::new(0.0, 0.0) {
                    break;
                }
            }
            total += v;
        }
        Ok(total)
    }
}

/// `∫_0^L x^m e^{i q x} dx` with `q = 2 pi n / L`.
fn axis_integral(m: u32, n: i64, l: f64) -> Complex64 {
    if n == 0 {
        return Complex64::new(super::powu(l, m + 1) / (m + 1) as f64, 0.0);
    }
    let q = 2.0 * PI * n as f64 / l;
    let inv_iq = Complex64::new(0.0, -1.0 / q);
    // I_0 = 0; I_m = L^m / (iq) - m/(iq) I_{m-1}, using e^{iqL} = 1
    let mut acc = Complex64::new(0.0, 0.0);
    let mut lpow = 1.0;
    for j in 1..=m {
        lpow *= l;
        acc = inv_iq * lpow - inv_iq * (j as f64) * acc;
    }
    acc
}

/// `∫_box e(x) dx`.
pub fn box_integral(e: &Expr, domain: &BoxDomain) -> Result<Complex64> {
    domain.integrate(e)
}

#[cfg(test)]
mod tests {
    use super::super::parse_expr;
    use super::*;

    /// Composite Simpson on one axis, used only to check the recursion.
    fn simpson(m: u32, q: f64, l: f64) -> Complex64 {
        let n = 20_000;
        let h = l / n as f64;
        let f = |x: f64| Complex64::new(0.0, q * x).exp() * super::super::powu(x, m);
        let mut s = f(0.0) + f(l);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += f(i as f64 * h) * w;
        }
        s * (h / 3.0)
    }

    #[test]
    fn closed_forms() {
        let l = 3.0;
        let b = BoxDomain::cube(2, l).unwrap();
        let k = 2.0 * PI / l;
        let e = Expr::plane_wave(&[k, 0.0]);
        assert!(b.integrate(&e).unwrap().norm() < 1e-14);
        let b1 = BoxDomain::new(alloc::vec![l]).unwrap();
        let x = parse_expr("x0", 1).unwrap();
        assert!((b1.integrate(&x).unwrap() - Complex64::new(l * l / 2.0, 0.0)).norm() < 1e-14);
        let one = parse_expr("1", 2).unwrap();
        assert!((b.integrate(&one).unwrap() - Complex64::new(l * l, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn recursion_matches_simpson() {
        let l = 2.5;
        for m in 0..5 {
            for n in [-2i64, 1, 3] {
                let q = 2.0 * PI * n as f64 / l;
                let exact = axis_integral(m, n, l);
                assert!((exact - simpson(m, q, l)).norm() < 1e-9, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn rejects_incompatible_wave() {
        let b = BoxDomain::cube(1, 1.0).unwrap();
        let e = Expr::plane_wave(&[1.0]);
        assert!(matches!(b.integrate(&e), Err(Error::NotBoxCompatible { axis: 0, .. })));
        assert_eq!(BoxDomain::new(alloc::vec![1.0, 0.0]), Err(Error::InvalidBox));
    }
}
