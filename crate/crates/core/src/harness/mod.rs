//! Checks behind the triviality-transfer argument: local commutativity,
//! spectral support, boost invariance, current norms and the verdict that
//! combines them.

pub mod convergence;

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::GaussianTestFn;
use crate::wightman::{self, minkowski_fourier, FieldSpec, QuadratureConfig};

/// A theory as seen by the harness: a two-point functional plus the norm of
/// its smeared Klein-Gordon current.
pub trait TheoryModel {
    fn label(&self) -> &str;

    fn mass(&self) -> f64;

    fn two_point(&self, f: &GaussianTestFn, g: &GaussianTestFn, q: &QuadratureConfig) -> Result<Complex64>;

    /// `‖j_f Ψ_0‖²` for the current `(□ + current_mass²) φ_f`.
    fn current_norm(&self, current_mass: f64, f: &GaussianTestFn, q: &QuadratureConfig) -> Result<f64>;

    /// `W(f, f_a)` for `f_a(x) = f(x - a)`.
    fn two_point_translates(&self, f: &GaussianTestFn, shifts: &[[f64; 2]], q: &QuadratureConfig) -> Result<Vec<Complex64>> {
        shifts
            .iter()
            .map(|a| self.two_point(f, &f.translated(a)?, q))
            .collect()
    }
}

/// Free scalar field of a given mass.
#[derive(Debug, Clone, PartialEq)]
pub struct TheorySpec {
    label: String,
    field: FieldSpec,
}

impl TheorySpec {
    pub fn new(label: &str, mass: f64) -> Result<Self> {
        Ok(TheorySpec { label: String::from(label), field: FieldSpec::new(mass)? })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }
}

impl TheoryModel for TheorySpec {
    fn label(&self) -> &str {
        &self.label
    }

    fn mass(&self) -> f64 {
        self.field.mass()
    }

    fn two_point(&self, f: &GaussianTestFn, g: &GaussianTestFn, q: &QuadratureConfig) -> Result<Complex64> {
        wightman::smeared_two_point(f, g, &self.field, q)
    }

    /// On shell `(□ + m²)` acts as `m² - p²`, so the current of mass `M`
    /// has norm `(M² - m²)² W(f, f)`.
    fn current_norm(&self, current_mass: f64, f: &GaussianTestFn, q: &QuadratureConfig) -> Result<f64> {
        let m = self.field.mass();
        let factor = current_mass * current_mass - m * m;
        Ok(factor * factor * self.two_point(f, f, q)?.re.max(0.0))
    }

    fn two_point_translates(&self, f: &GaussianTestFn, shifts: &[[f64; 2]], q: &QuadratureConfig) -> Result<Vec<Complex64>> {
        wightman::two_point_translates(f, shifts, &self.field, q)
    }
}

/// A fabricated theory for exercising the harness: it borrows another
/// theory's two-point function and may override the current or add point
/// masses to the spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct MockTheory {
    pub label: String,
    pub donor: TheorySpec,
    pub current_override: Option<f64>,
    /// `(momentum, weight)`: adds `weight conj(F(P)) G(P)` to `W(f, g)`.
    pub spectral_atoms: Vec<([f64; 2], f64)>,
}

impl MockTheory {
    pub fn copying(label: &str, donor: &TheorySpec) -> Self {
        MockTheory { label: String::from(label), donor: donor.clone(), current_override: None, spectral_atoms: Vec::new() }
    }

    pub fn with_current(mut self, value: f64) -> Self {
        self.current_override = Some(value);
        self
    }

    pub fn with_atom(mut self, momentum: [f64; 2], weight: f64) -> Self {
        self.spectral_atoms.push((momentum, weight));
        self
    }
}

impl TheoryModel for MockTheory {
    fn label(&self) -> &str {
        &self.label
    }

    fn mass(&self) -> f64 {
        self.donor.mass()
    }

    fn two_point(&self, f: &GaussianTestFn, g: &GaussianTestFn, q: &QuadratureConfig) -> Result<Complex64> {
        let mut w = self.donor.two_point(f, g, q)?;
        for &(p, weight) in &self.spectral_atoms {
            w += minkowski_fourier(f, p[0], p[1]).conj() * minkowski_fourier(g, p[0], p[1]) * weight;
        }
        Ok(w)
    }

    fn current_norm(&self, current_mass: f64, f: &GaussianTestFn, q: &QuadratureConfig) -> Result<f64> {
        match self.current_override {
            Some(v) => Ok(v),
            None => self.donor.current_norm(current_mass, f, q),
        }
    }

    fn two_point_translates(&self, f: &GaussianTestFn, shifts: &[[f64; 2]], q: &QuadratureConfig) -> Result<Vec<Complex64>> {
        let mut out = self.donor.two_point_translates(f, shifts, q)?;
        for &(p, weight) in &self.spectral_atoms {
            let d = minkowski_fourier(f, p[0], p[1]).norm_sqr() * weight;
            for (w, a) in out.iter_mut().zip(shifts) {
                let ph = p[0] * a[0] - p[1] * a[1];
                *w += Complex64::new(libm::cos(ph), libm::sin(ph)) * d;
            }
        }
        Ok(out)
    }
}

/// Thresholds for every check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub two_point_eq: f64,
    pub current: f64,
    pub lcc_spacelike: f64,
    pub so11: f64,
    pub spectral_off_cone: f64,
    pub spectral_detection: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            two_point_eq: 1e-8,
            current: 1e-10,
            lcc_spacelike: 1e-6,
            so11: 1e-6,
            spectral_off_cone: 1e-6,
            spectral_detection: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Separation {
    Spacelike,
    /// Timelike or lightlike.
    Causal,
}

impl Separation {
    pub fn as_str(&self) -> &'static str {
        match self {
            Separation::Spacelike => "spacelike",
            Separation::Causal => "timelike",
        }
    }
}

/// Two Gaussians of width `sigma`, the second displaced by `(dt, dz)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationSpec {
    pub dt: f64,
    pub dz: f64,
    pub sigma: f64,
}

impl SeparationSpec {
    pub fn new(dt: f64, dz: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(Error::InvalidGaussian("width must be positive"));
        }
        Ok(SeparationSpec { dt, dz, sigma })
    }

    pub fn classification(&self) -> Separation {
        if self.dt * self.dt < self.dz * self.dz {
            Separation::Spacelike
        } else {
            Separation::Causal
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LccReport {
    pub commutator_abs: f64,
    pub classification: Separation,
    pub pass: bool,
}

/// `|W(f, g) - W(g, f)|`; only spacelike pairs are required to vanish.
pub fn check_lcc(theory: &dyn TheoryModel, sep: &SeparationSpec, tol: &Tolerances, q: &QuadratureConfig) -> Result<LccReport> {
    let s = alloc::vec![sep.sigma, sep.sigma];
    let f = GaussianTestFn::plain(alloc::vec![0.0, 0.0], s.clone())?;
    let g = GaussianTestFn::plain(alloc::vec![sep.dt, sep.dz], s)?;
    let commutator_abs = (theory.two_point(&f, &g, q)? - theory.two_point(&g, &f, q)?).norm();
    let classification = sep.classification();
    let pass = match classification {
        Separation::Spacelike => commutator_abs < tol.lcc_spacelike,
        Separation::Causal => true,
    };
    Ok(LccReport { commutator_abs, classification, pass })
}

/// Translation grid for the spectral estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConfig {
    /// Width of the Gaussian window over translations.
    pub window: f64,
    /// Grid spacing.
    pub spacing: f64,
    /// Grid half-width in units of the window.
    pub extent: f64,
    /// Width of the probing test function.
    pub probe_sigma: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        SpectralConfig { window: 8.0, spacing: 0.4, extent: 6.0, probe_sigma: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeResult {
    pub momentum: [f64; 2],
    pub in_cone: bool,
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralReport {
    pub probes: Vec<ProbeResult>,
    pub max_outside_cone: f64,
    pub max_inside_cone: f64,
    pub pass: bool,
}

/// Spectral density of `a -> W(f, f_a)` at each probe momentum, from a
/// windowed Fourier sum over a translation grid:
/// `ρ(P) = (2π)^{-2} Σ_a h² w(a) e^{-i P.a} W(f, f_a)`.
pub fn check_spectral(
    theory: &dyn TheoryModel,
    probes: &[[f64; 2]],
    cfg: &SpectralConfig,
    tol: &Tolerances,
    q: &QuadratureConfig,
) -> Result<SpectralReport> {
    if !(cfg.window > 0.0 && cfg.spacing > 0.0 && cfg.extent > 0.0) {
        return Err(Error::InvalidConfig("spectral grid parameters must be positive"));
    }
    let nyquist = 0.5 * PI / cfg.spacing;
    for p in probes {
        if p[0].abs() > nyquist || p[1].abs() > nyquist {
            return Err(Error::GridTooCoarse { probe: *p, nyquist });
        }
    }
    let half = libm::round(cfg.extent * cfg.window / cfg.spacing) as i64;
    let mut shifts = Vec::new();
    let mut weights = Vec::new();
    let h = cfg.spacing;
    for i in -half..=half {
        for j in -half..=half {
            let a = [i as f64 * h, j as f64 * h];
            shifts.push(a);
            weights.push(libm::exp(-(a[0] * a[0] + a[1] * a[1]) / (2.0 * cfg.window * cfg.window)));
        }
    }
    let f = GaussianTestFn::plain(alloc::vec![0.0, 0.0], alloc::vec![cfg.probe_sigma, cfg.probe_sigma])?;
    let values = theory.two_point_translates(&f, &shifts, q)?;
    let norm = h * h / (4.0 * PI * PI);
    let mut results = Vec::with_capacity(probes.len());
    for p in probes {
        let mut s = Complex64::new(0.0, 0.0);
        for ((a, w), v) in shifts.iter().zip(&weights).zip(&values) {
            let ph = p[0] * a[0] - p[1] * a[1];
            s += Complex64::new(libm::cos(ph), -libm::sin(ph)) * (*v * *w);
        }
        results.push(ProbeResult { momentum: *p, in_cone: p[0] >= p[1].abs(), density: (s * norm).norm() });
    }
    let max_of = |inside: bool| {
        results
            .iter()
            .filter(|r| r.in_cone == inside)
            .fold(0.0f64, |m, r| m.max(r.density))
    };
    let max_outside_cone = max_of(false);
    let max_inside_cone = max_of(true);
    let pass = max_outside_cone < tol.spectral_off_cone && max_inside_cone > tol.spectral_detection;
    Ok(SpectralReport { probes: results, max_outside_cone, max_inside_cone, pass })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct So11Report {
    pub delta: f64,
    pub pass: bool,
}

/// Largest rapidity accepted by [`check_so11`].
pub const MAX_RAPIDITY: f64 = 2.0;

/// `|W(Λf, Λg) - W(f, g)|` for a boost of the given rapidity.
pub fn check_so11(
    theory: &dyn TheoryModel,
    f: &GaussianTestFn,
    g: &GaussianTestFn,
    rapidity: f64,
    tol: &Tolerances,
    q: &QuadratureConfig,
) -> Result<So11Report> {
    if !(rapidity.abs() <= MAX_RAPIDITY) {
        return Err(Error::RapidityOutOfRange(rapidity));
    }
    let w = theory.two_point(f, g, q)?;
    let wb = theory.two_point(&f.boosted(rapidity)?, &g.boosted(rapidity)?, q)?;
    let delta = (wb - w).norm();
    Ok(So11Report { delta, pass: delta < tol.so11 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaagVerdict {
    ConsistentBothTrivial,
    InapplicablePremiseFails,
    ViolationDetected,
}

impl HaagVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            HaagVerdict::ConsistentBothTrivial => "consistent-both-trivial",
            HaagVerdict::InapplicablePremiseFails => "inapplicable-premise-fails",
            HaagVerdict::ViolationDetected => "violation-detected",
        }
    }

    /// The verdict as a function of the measured numbers. With equal
    /// two-point functions, triviality of either theory must carry over to
    /// the other; if neither is trivial there is nothing to transfer.
    pub fn decide(max_delta: f64, current_a: f64, current_b: f64, tol: &Tolerances) -> Self {
        if !(max_delta < tol.two_point_eq) {
            return HaagVerdict::InapplicablePremiseFails;
        }
        match (current_a < tol.current, current_b < tol.current) {
            (true, true) => HaagVerdict::ConsistentBothTrivial,
            (true, false) | (false, true) => HaagVerdict::ViolationDetected,
            (false, false) => HaagVerdict::InapplicablePremiseFails,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HaagReport {
    pub two_point_deltas: Vec<f64>,
    pub max_delta: f64,
    pub current_a: f64,
    pub current_b: f64,
    pub verdict: HaagVerdict,
    pub tolerances: Tolerances,
}

/// Minimum number of test pairs for [`haag_verdict`].
pub const MIN_PAIRS: usize = 3;

/// Compares two theories on the given test pairs. Both currents use the
/// mass of `a` and are maximized over every test function that appears.
pub fn haag_verdict(
    a: &dyn TheoryModel,
    b: &dyn TheoryModel,
    pairs: &[(GaussianTestFn, GaussianTestFn)],
    tol: &Tolerances,
    q: &QuadratureConfig,
) -> Result<HaagReport> {
    if pairs.len() < MIN_PAIRS {
        return Err(Error::TooFewPairs(pairs.len()));
    }
    let mut two_point_deltas = Vec::with_capacity(pairs.len());
    for (f, g) in pairs {
        two_point_deltas.push((a.two_point(f, g, q)? - b.two_point(f, g, q)?).norm());
    }
    let max_delta = two_point_deltas.iter().fold(0.0f64, |m, &d| m.max(d));
    let m = a.mass();
    let (mut current_a, mut current_b) = (0.0f64, 0.0f64);
    for f in pairs.iter().flat_map(|(f, g)| [f, g]) {
        current_a = current_a.max(a.current_norm(m, f, q)?);
        current_b = current_b.max(b.current_norm(m, f, q)?);
    }
    let verdict = HaagVerdict::decide(max_delta, current_a, current_b, tol);
    Ok(HaagReport { two_point_deltas, max_delta, current_a, current_b, verdict, tolerances: *tol })
}

/// Five test pairs with distinct centers, widths and tilts.
pub fn standard_pairs() -> Result<Vec<(GaussianTestFn, GaussianTestFn)>> {
    let one = crate::expr::Expr::constant(2, Complex64::new(1.0, 0.0));
    let mk = |c: [f64; 2], s: [f64; 2], t: [f64; 2]| GaussianTestFn::new(c.to_vec(), s.to_vec(), t.to_vec(), one.clone());
    Ok(alloc::vec![
        (mk([0.0, 0.0], [1.0, 1.0], [0.0, 0.0])?, mk([0.5, 0.3], [0.8, 0.8], [0.0, 0.0])?),
        (mk([0.2, -0.4], [0.6, 1.2], [0.3, 0.0])?, mk([-0.3, 0.7], [1.1, 0.7], [0.0, -0.2])?),
        (mk([1.0, 0.0], [0.5, 0.5], [0.0, 0.4])?, mk([0.0, 1.0], [0.9, 0.6], [0.2, 0.2])?),
        (mk([0.4, 0.4], [1.5, 1.5], [-0.3, 0.1])?, mk([-0.6, -0.2], [1.0, 1.3], [0.1, 0.0])?),
        (mk([0.0, -1.0], [0.7, 0.9], [0.0, 0.0])?, mk([0.3, 0.3], [0.7, 0.9], [0.5, -0.5])?),
    ])
}
