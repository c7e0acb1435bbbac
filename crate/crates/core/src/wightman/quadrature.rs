//! Composite Gauss-Legendre rule on a symmetric momentum interval.

use alloc::vec::Vec;
use core::f64::consts::PI;

/// Points per panel.
pub const PANEL_POINTS: usize = 8;

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// `P_n`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = libm::cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        dp = if d != 0.0 { d } else { dp };
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out.reverse();
    out
}

/// `(P_n(x), P_n'(x))`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    (p1, n * (x * p1 - p0) / (x * x - 1.0))
}

/// Nodes and weights of the composite rule on `[-cutoff, cutoff]` with
/// `panels` equal panels, in increasing node order.
pub fn composite_rule(cutoff: f64, panels: usize) -> Vec<(f64, f64)> {
    let base = gauss_legendre(PANEL_POINTS);
    let h = 2.0 * cutoff / panels as f64;
    let mut out = Vec::with_capacity(panels * PANEL_POINTS);
    for p in 0..panels {
        let mid = -cutoff + (p as f64 + 0.5) * h;
        for &(x, w) in &base {
            out.push((mid + 0.5 * h * x, 0.5 * h * w));
        }
    }
    out
}
