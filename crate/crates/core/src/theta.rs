use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Constant antisymmetric noncommutativity matrix `θ^{μν}`,
/// `[x^μ, x^ν] = i θ^{μν}`. Entries carry units of length squared.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl ThetaMatrix {
    /// Row-major entries; rejects anything not exactly antisymmetric.
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConfig("theta dimension must be at least 1"));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: entries.len() });
        }
        for row in 0..dim {
            for col in 0..dim {
                let (a, b) = (entries[row * dim + col], entries[col * dim + row]);
                if !a.is_finite() || a != -b {
                    return Err(Error::NotAntisymmetric { row, col });
                }
            }
        }
        // normalize -0.0 on the diagonal and elsewhere
        let entries = entries.into_iter().map(|v| v + 0.0).collect();
        Ok(ThetaMatrix { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for r in rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: r.len() });
            }
            entries.extend_from_slice(r);
        }
        Self::new(dim, entries)
    }

    pub fn zero(dim: usize) -> Self {
        ThetaMatrix { dim, entries: vec![0.0; dim * dim] }
    }

    /// Only `θ^{μν} = -θ^{νμ} = value` nonzero.
    pub fn with_pair(dim: usize, mu: usize, nu: usize, value: f64) -> Result<Self> {
        if mu >= dim || nu >= dim {
            return Err(Error::AxisOutOfRange { axis: mu.max(nu), dim });
        }
        if mu == nu && value != 0.0 {
            return Err(Error::NotAntisymmetric { row: mu, col: nu });
        }
        let mut entries = vec![0.0; dim * dim];
        entries[mu * dim + nu] = value;
        entries[nu * dim + mu] = -value;
        Self::new(dim, entries)
    }

    /// Space-space form: `θ^{12} = -θ^{21} = theta`, time commuting.
    pub fn space_space(dim: usize, theta: f64) -> Result<Self> {
        if dim < 3 {
            return Err(Error::InvalidConfig("space-space theta needs dimension >= 3"));
        }
        Self::with_pair(dim, 1, 2, theta)
    }

    /// Two-dimensional `θ^{01} = -θ^{10} = theta`, the noncommuting plane on
    /// its own.
    pub fn planar(theta: f64) -> Result<Self> {
        Self::with_pair(2, 0, 1, theta)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, mu: usize, nu: usize) -> f64 {
        self.entries[mu * self.dim + nu]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Max-abs entry.
    pub fn norm(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `Σ_{μν} |θ^{μν}|`, at most `d^2` times [`norm`](Self::norm). This is
    /// the scale that makes Gevrey term bounds rigorous for the full double
    /// sum over index pairs.
    pub fn pair_sum(&self) -> f64 {
        self.entries.iter().fold(0.0, |s, v| s + v.abs())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0.0)
    }

    /// True when `θ^{0i} = 0`: time commutes with every coordinate.
    pub fn is_space_space(&self) -> bool {
        (0..self.dim).all(|i| self.get(0, i) == 0.0)
    }

    /// Nonzero entries `(μ, ν, θ^{μν})`, both orientations.
    pub fn nonzero_entries(&self) -> Vec<(usize, usize, f64)> {
        let d = self.dim;
        (0..d * d)
            .filter(|&i| self.entries[i] != 0.0)
            .map(|i| (i / d, i % d, self.entries[i]))
            .collect()
    }

    /// `k_μ θ^{μν} p_ν`, summed as `Σ_{μ<ν} θ^{μν} (k_μ p_ν - k_ν p_μ)` so
    /// that `bilinear(k, k)` is exactly zero and swapping arguments flips
    /// the sign exactly.
    pub fn bilinear(&self, k: &[f64], p: &[f64]) -> f64 {
        let d = self.dim;
        let mut s = 0.0;
        for mu in 0..d {
            for nu in mu + 1..d {
                let t = self.entries[mu * d + nu];
                if t != 0.0 {
                    s += t * (k[mu] * p[nu] - k[nu] * p[mu]);
                }
            }
        }
        s
    }

    /// `(k θ)^ν = k_μ θ^{μν}`.
    pub fn left(&self, k: &[f64]) -> Vec<f64> {
        let d = self.dim;
        (0..d).map(|nu| (0..d).map(|mu| k[mu] * self.entries[mu * d + nu]).sum()).collect()
    }

    /// `(θ p)^μ = θ^{μν} p_ν`.
    pub fn right(&self, p: &[f64]) -> Vec<f64> {
        let d = self.dim;
        (0..d).map(|mu| (0..d).map(|nu| self.entries[mu * d + nu] * p[nu]).sum()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_antisymmetric() {
        assert_eq!(
            ThetaMatrix::new(2, vec![0.0, 1.0, 1.0, 0.0]),
            Err(Error::NotAntisymmetric { row: 0, col: 1 })
        );
        assert_eq!(
            ThetaMatrix::new(2, vec![1.0, 0.0, 0.0, -1.0]),
            Err(Error::NotAntisymmetric { row: 0, col: 0 })
        );
        assert!(ThetaMatrix::new(2, vec![0.0, 1.0, -1.0, 0.0]).is_ok());
    }

    #[test]
    fn forms_and_norms() {
        let t = ThetaMatrix::space_space(4, 0.7).unwrap();
        assert_eq!(t.get(1, 2), 0.7);
        assert_eq!(t.get(2, 1), -0.7);
        assert!(t.is_space_space());
        assert_eq!(t.norm(), 0.7);
        assert!((t.pair_sum() - 1.4).abs() < 1e-15);
        let g = ThetaMatrix::with_pair(4, 0, 3, 0.2).unwrap();
        assert!(!g.is_space_space());
        assert!(ThetaMatrix::space_space(2, 1.0).is_err());
    }

    #[test]
    fn bilinear_is_antisymmetric() {
        let t = ThetaMatrix::from_rows(&[vec![0.0, 0.3, -1.0], vec![-0.3, 0.0, 2.0], vec![1.0, -2.0, 0.0]]).unwrap();
        let k = [0.4, -1.1, 0.9];
        let p = [1.7, 0.2, -0.5];
        assert_eq!(t.bilinear(&k, &p), -t.bilinear(&p, &k));
        assert_eq!(t.bilinear(&k, &k), 0.0);
        let lk = t.left(&k);
        let s: f64 = lk.iter().zip(&p).map(|(a, b)| a * b).sum();
        assert!((s - t.bilinear(&k, &p)).abs() < 1e-15);
    }
}
