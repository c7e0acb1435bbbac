//! Small dense helpers for the d x d matrices used by Gaussian test
//! functions. Matrices are row-major `Vec<f64>`.

use alloc::vec;
use alloc::vec::Vec;

/// Inverse and determinant by Gauss-Jordan elimination with partial
/// pivoting. Returns `None` for singular input.
pub fn inverse_det(m: &[f64], d: usize) -> Option<(Vec<f64>, f64)> {
    let mut a = m.to_vec();
    let mut inv = vec![0.0; d * d];
    for i in 0..d {
        inv[i * d + i] = 1.0;
    }
    let mut det = 1.0;
    for col in 0..d {
        let pivot = (col..d)
            .max_by(|&x, &y| a[x * d + col].abs().total_cmp(&a[y * d + col].abs()))?;
        let p = a[pivot * d + col];
        if p == 0.0 || !p.is_finite() {
            return None;
        }
        if pivot != col {
            for j in 0..d {
                a.swap(pivot * d + j, col * d + j);
                inv.swap(pivot * d + j, col * d + j);
            }
            det = -det;
        }
        det *= p;
        for j in 0..d {
            a[col * d + j] /= p;
            inv[col * d + j] /= p;
        }
        for r in 0..d {
            if r == col {
                continue;
            }
            let factor = a[r * d + col];
            if factor != 0.0 {
                for j in 0..d {
                    a[r * d + j] -= factor * a[col * d + j];
                    inv[r * d + j] -= factor * inv[col * d + j];
                }
            }
        }
    }
    Some((inv, det))
}

/// True when `m` is symmetric and Cholesky succeeds.
pub fn is_symmetric_positive_definite(m: &[f64], d: usize) -> bool {
    for i in 0..d {
        for j in 0..i {
            let (a, b) = (m[i * d + j], m[j * d + i]);
            if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                return false;
            }
        }
    }
    let mut l = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..=i {
            let mut s = m[i * d + j];
            for k in 0..j {
                s -= l[i * d + k] * l[j * d + k];
            }
            if i == j {
                if !(s > 0.0) || !s.is_finite() {
                    return false;
                }
                l[i * d + i] = libm::sqrt(s);
            } else {
                l[i * d + j] = s / l[j * d + j];
            }
        }
    }
    true
}

/// Lower bound on the smallest eigenvalue of a symmetric positive definite
/// matrix: 1 / (largest Gershgorin radius of the inverse).
pub fn min_eigen_lower_bound(m: &[f64], d: usize) -> Option<f64> {
    let (inv, _) = inverse_det(m, d)?;
    let mut worst: f64 = 0.0;
    for i in 0..d {
        let row: f64 = (0..d).map(|j| inv[i * d + j].abs()).sum();
        worst = worst.max(row);
    }
    if worst > 0.0 {
        Some(1.0 / worst)
    } else {
        None
    }
}

/// `m * v`
pub fn mat_vec(m: &[f64], v: &[f64]) -> Vec<f64> {
    let d = v.len();
    (0..d).map(|i| (0..d).map(|j| m[i * d + j] * v[j]).sum()).collect()
}

/// `m^T * v`
pub fn mat_t_vec(m: &[f64], v: &[f64]) -> Vec<f64> {
    let d = v.len();
    (0..d).map(|i| (0..d).map(|j| m[j * d + i] * v[j]).sum()).collect()
}

/// `m^T * a * m`
pub fn congruence(a: &[f64], m: &[f64], d: usize) -> Vec<f64> {
    let mut out = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            let mut s = 0.0;
            for k in 0..d {
                for l in 0..d {
                    s += m[k * d + i] * a[k * d + l] * m[l * d + j];
                }
            }
            out[i * d + j] = s;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_2x2() {
        let (inv, det) = inverse_det(&[2.0, 1.0, 1.0, 3.0], 2).unwrap();
        assert!((det - 5.0).abs() < 1e-14);
        let expect = [0.6, -0.2, -0.2, 0.4];
        for (a, b) in inv.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_and_indefinite() {
        assert!(inverse_det(&[1.0, 2.0, 2.0, 4.0], 2).is_none());
        assert!(!is_symmetric_positive_definite(&[1.0, 2.0, 2.0, 1.0], 2));
        assert!(is_symmetric_positive_definite(&[2.0, 1.0, 1.0, 2.0], 2));
        let lo = min_eigen_lower_bound(&[2.0, 1.0, 1.0, 2.0], 2).unwrap();
        assert!(lo <= 1.0 + 1e-12 && lo > 0.0);
    }
}
