//! JSON suite configuration.

use std::path::Path;

use haag_core::harness::{MockTheory, TheoryModel, TheorySpec, Tolerances};
use haag_core::wightman::QuadratureConfig;
use haag_core::{parse_expr, GaussianTestFn, ThetaMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{expression_error, CliError, CliResult};

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    #[serde(default)]
    pub theories: Vec<TheoryEntry>,
    #[serde(default)]
    pub test_functions: Vec<TestFunctionEntry>,
    #[serde(default)]
    pub theta: Option<ThetaEntry>,
    #[serde(default)]
    pub quadrature: QuadratureEntry,
    #[serde(default)]
    pub tolerances: TolerancesEntry,
    /// Extra checks run by `haag-check` on the first theory.
    #[serde(default)]
    pub checks: ChecksEntry,
    /// Noncommuting factors for `wightman n-point`.
    #[serde(default)]
    pub nc_factors: Option<NcEntry>,
    /// Probe points for `converge`; defaults to the generator centers and
    /// their midpoint.
    #[serde(default)]
    pub probe_points: Option<Vec<Vec<f64>>>,
    /// Polynomial generators for `converge`, used instead of the first two
    /// test functions.
    #[serde(default)]
    pub polynomials: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TheoryEntry {
    pub label: String,
    pub mass: f64,
    /// Turns the entry into a mock: free-field two-point function with this
    /// fixed current norm.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub current_override: Option<f64>,
}

/// A number applies to every axis.
#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum PerAxis {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl PerAxis {
    fn expand(&self, dim: usize) -> Vec<f64> {
        match self {
            PerAxis::Scalar(v) => vec![*v; dim],
            PerAxis::Vector(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TestFunctionEntry {
    pub center: Vec<f64>,
    pub sigma: PerAxis,
    #[serde(default)]
    pub tilt: Option<Vec<f64>>,
    /// Polynomial prefactor in the expression grammar.
    #[serde(default)]
    pub prefactor: Option<String>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ThetaEntry {
    Scalar(f64),
    Matrix(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureEntry {
    #[serde(default)]
    pub cutoff: Option<f64>,
    #[serde(default)]
    pub nodes: Option<usize>,
    #[serde(default)]
    pub tail_tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TolerancesEntry {
    #[serde(default)]
    pub two_point_eq: Option<f64>,
    #[serde(default)]
    pub current: Option<f64>,
    #[serde(default)]
    pub lcc_spacelike: Option<f64>,
    #[serde(default)]
    pub so11: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ChecksEntry {
    /// `[dt, dz, sigma]`
    #[serde(default)]
    pub separations: Vec<[f64; 3]>,
    /// `[p0, p3]`
    #[serde(default)]
    pub spectral_probes: Vec<[f64; 2]>,
    /// Boosts applied to every test pair.
    #[serde(default)]
    pub rapidities: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct NcEntry {
    #[serde(rename = "box")]
    pub domain: Vec<f64>,
    pub exprs: Vec<String>,
}

impl SuiteConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("malformed config: {e}")))
    }

    pub fn quadrature_config(&self) -> CliResult<QuadratureConfig> {
        let d = QuadratureConfig::default();
        let q = QuadratureConfig {
            cutoff: self.quadrature.cutoff,
            nodes_per_unit: self.quadrature.nodes.unwrap_or(d.nodes_per_unit),
            tail_tol: self.quadrature.tail_tol.unwrap_or(d.tail_tol),
            max_cutoff: d.max_cutoff,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn tolerances(&self) -> Tolerances {
        let d = Tolerances::default();
        let t = &self.tolerances;
        Tolerances {
            two_point_eq: t.two_point_eq.unwrap_or(d.two_point_eq),
            current: t.current.unwrap_or(d.current),
            lcc_spacelike: t.lcc_spacelike.unwrap_or(d.lcc_spacelike),
            so11: t.so11.unwrap_or(d.so11),
            ..d
        }
    }

    pub fn test_functions(&self) -> CliResult<Vec<GaussianTestFn>> {
        self.test_functions.iter().map(TestFunctionEntry::build).collect()
    }

    /// Consecutive test functions, `(f_0, f_1), (f_2, f_3), ...`.
    pub fn test_pairs(&self) -> CliResult<Vec<(GaussianTestFn, GaussianTestFn)>> {
        let fs = self.test_functions()?;
        if fs.len() % 2 != 0 {
            return Err(CliError::Usage("test_functions must come in pairs".into()));
        }
        Ok(fs.chunks(2).map(|c| (c[0].clone(), c[1].clone())).collect())
    }

    pub fn theta(&self, dim: usize) -> CliResult<ThetaMatrix> {
        match &self.theta {
            None => Ok(ThetaMatrix::zero(dim)),
            Some(t) => t.build(dim),
        }
    }
}

impl TestFunctionEntry {
    pub fn build(&self) -> CliResult<GaussianTestFn> {
        let d = self.center.len();
        let tilt = self.tilt.clone().unwrap_or_else(|| vec![0.0; d]);
        let src = self.prefactor.as_deref().unwrap_or("1");
        let prefactor = parse_expr(src, d).map_err(|e| expression_error(src, e))?;
        Ok(GaussianTestFn::new(self.center.clone(), self.sigma.expand(d), tilt, prefactor)?)
    }
}

impl ThetaEntry {
    /// A scalar is `θ^{01}` in two dimensions and `θ^{12}` otherwise.
    pub fn build(&self, dim: usize) -> CliResult<ThetaMatrix> {
        let m = match self {
            ThetaEntry::Scalar(v) => scalar_theta(dim, *v)?,
            ThetaEntry::Matrix(rows) => ThetaMatrix::from_rows(rows)?,
        };
        if m.dim() != dim {
            return Err(CliError::Usage(format!("theta is {}x{} but expressions have dimension {dim}", m.dim(), m.dim())));
        }
        Ok(m)
    }
}

pub fn scalar_theta(dim: usize, v: f64) -> CliResult<ThetaMatrix> {
    Ok(match dim {
        2 => ThetaMatrix::planar(v)?,
        d if d >= 3 => ThetaMatrix::space_space(d, v)?,
        _ => return Err(CliError::Usage("a scalar theta needs dimension at least 2".into())),
    })
}

impl TheoryEntry {
    pub fn build(&self) -> CliResult<Box<dyn TheoryModel>> {
        let spec = TheorySpec::new(&self.label, self.mass)?;
        Ok(match self.current_override {
            None => Box::new(spec),
            Some(c) => Box::new(MockTheory::copying(&self.label, &spec).with_current(c)),
        })
    }
}

pub fn theta_rows(theta: &ThetaMatrix) -> Vec<Vec<f64>> {
    let d = theta.dim();
    (0..d).map(|i| (0..d).map(|j| theta.get(i, j)).collect()).collect()
}
