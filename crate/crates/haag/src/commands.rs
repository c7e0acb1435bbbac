//! One function per subcommand, each returning its report.

use std::path::Path;

use haag_core::harness::convergence::{weak_convergence_study, ConvergenceConfig, Generator};
use haag_core::harness::{check_lcc, check_so11, check_spectral, haag_verdict, HaagVerdict, SeparationSpec, SpectralConfig};
use haag_core::wightman::{smeared_two_point, star_smeared_npoint, wick_npoint, FieldSpec, NCFactor, QuadratureConfig};
use haag_core::{certify_convergence, format_expr, parse_expr, star_product, term_bound, BoxDomain, GevreyBound, StarConfig, StarMode, ThetaMatrix};
use serde_json::{json, Value};

use crate::config::{scalar_theta, theta_rows, SuiteConfig, ThetaEntry};
use crate::error::{expression_error, CliError, CliResult};
use crate::report::{complex, Report};

pub struct StarRequest<'a> {
    pub theta: Option<f64>,
    pub theta_file: Option<&'a Path>,
    pub order: Option<usize>,
    pub adaptive: Option<f64>,
    pub max_order: usize,
    pub dim: usize,
    pub exprs: &'a [String],
}

pub fn star(req: &StarRequest) -> CliResult<Report> {
    if req.dim == 0 {
        return Err(CliError::Usage("--dim must be positive".into()));
    }
    let factors = req
        .exprs
        .iter()
        .map(|s| parse_expr(s, req.dim).map_err(|e| expression_error(s, e)))
        .collect::<CliResult<Vec<_>>>()?;
    if factors.len() < 2 {
        return Err(CliError::Usage("star needs at least two expressions".into()));
    }
    let theta = match (req.theta, req.theta_file) {
        (Some(v), _) => scalar_theta(req.dim, v)?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let entry: ThetaEntry = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: malformed theta: {e}", path.display())))?;
            entry.build(req.dim)?
        }
        (None, None) => ThetaMatrix::zero(req.dim),
    };
    let cfg = match (req.order, req.adaptive) {
        (Some(n), _) => StarConfig { max_order: req.max_order.max(n), ..StarConfig::fixed(n) },
        (None, Some(eps)) => StarConfig::adaptive(eps, req.max_order)?,
        (None, None) => StarConfig { max_order: req.max_order, ..StarConfig::exact() },
    };
    let out = star_product(&factors, &theta, &cfg)?;
    let mode = match cfg.mode {
        StarMode::ExactIfTerminating => json!({ "kind": "exact" }),
        StarMode::FixedOrder(n) => json!({ "kind": "fixed", "order": n }),
        StarMode::Adaptive(eps) => json!({ "kind": "adaptive", "tolerance": eps, "max_order": cfg.max_order }),
    };
    let resolved = json!({
        "dim": req.dim,
        "theta": theta_rows(&theta),
        "mode": mode,
        "factors": factors.iter().map(format_expr).collect::<Vec<_>>(),
    });
    let results = json!({
        "result": format_expr(&out.value),
        "terminated": out.terminated,
        "orders_used": out.orders_used,
        "remainder_bound": out.remainder_bound,
    });
    Ok(Report::new("star", resolved, results, None, true))
}

pub fn certify(beta: f64, b: f64, c: f64, theta: f64) -> CliResult<Report> {
    let bound = GevreyBound::new(c, b, beta)?;
    let th = ThetaMatrix::planar(theta)?;
    let cert = certify_convergence(&bound, &bound, &th);
    let resolved = json!({ "beta": beta, "B": b, "C": c, "theta": theta, "theta_matrix": theta_rows(&th) });
    let results = json!({
        "verdict": cert.verdict.as_str(),
        "convergent": cert.verdict.is_convergent(),
        "theta_norm": cert.theta_norm,
        "ratio_trace": cert.ratio_trace,
        "term_bounds": (0..=10).map(|n| term_bound(n, &bound, &bound, &th)).collect::<Vec<_>>(),
    });
    Ok(Report::new("certify", resolved, results, Some(cert.verdict.as_str().to_string()), true))
}

fn quadrature_json(q: &QuadratureConfig) -> Value {
    json!({ "cutoff": q.cutoff, "nodes": q.nodes_per_unit, "tail_tol": q.tail_tol, "max_cutoff": q.max_cutoff })
}

/// The config with every default filled in.
fn resolved_suite(cfg: &SuiteConfig, q: &QuadratureConfig) -> CliResult<Value> {
    let mut v = serde_json::to_value(cfg).expect("config serializes");
    v["quadrature"] = quadrature_json(q);
    let fs = cfg.test_functions()?;
    v["test_functions"] = fs
        .iter()
        .map(|f| {
            json!({
                "center": f.center(),
                "sigma": f.sigma(),
                "precision": f.precision(),
                "tilt": f.tilt(),
                "prefactor": format_expr(f.prefactor()),
            })
        })
        .collect();
    Ok(v)
}

pub const NC_COUPLING: &str = "star links the (x1,x2) factors of consecutive smearing variables, left-associated";

pub fn wightman(n_point: bool, mass: f64, cfg: &SuiteConfig) -> CliResult<Report> {
    let spec = FieldSpec::new(mass)?;
    let q = cfg.quadrature_config()?;
    let mut resolved = resolved_suite(cfg, &q)?;
    resolved["mass"] = json!(mass);
    if !n_point {
        let values = cfg
            .test_pairs()?
            .iter()
            .map(|(f, g)| smeared_two_point(f, g, &spec, &q).map(complex))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(Report::new("wightman two-point", resolved, json!({ "two_point": values }), None, true));
    }
    let fs = cfg.test_functions()?;
    let mut results = json!({ "wick": complex(wick_npoint(&fs, &spec, &q)?) });
    if let Some(nc) = &cfg.nc_factors {
        let domain = BoxDomain::new(nc.domain.clone())?;
        let factors = nc
            .exprs
            .iter()
            .map(|s| {
                let e = parse_expr(s, 2).map_err(|e| expression_error(s, e))?;
                Ok(NCFactor::new(e, domain.clone())?)
            })
            .collect::<CliResult<Vec<_>>>()?;
        let theta = match &cfg.theta {
            None => ThetaMatrix::zero(2),
            Some(ThetaEntry::Scalar(v)) => ThetaMatrix::planar(*v)?,
            Some(ThetaEntry::Matrix(rows)) => ThetaMatrix::from_rows(rows)?,
        };
        results["star_smeared"] = complex(star_smeared_npoint(&fs, &factors, &theta, &spec, &q)?);
        results["coupling"] = json!(NC_COUPLING);
    }
    Ok(Report::new("wightman n-point", resolved, results, None, true))
}

pub fn haag_check(cfg: &SuiteConfig) -> CliResult<Report> {
    if cfg.theories.len() < 2 {
        return Err(CliError::Usage("haag-check needs two theories".into()));
    }
    let q = cfg.quadrature_config()?;
    let tol = cfg.tolerances();
    let a = cfg.theories[0].build()?;
    let b = cfg.theories[1].build()?;
    let pairs = cfg.test_pairs()?;
    let rep = haag_verdict(a.as_ref(), b.as_ref(), &pairs, &tol, &q)?;
    let mut pass = rep.verdict != HaagVerdict::ViolationDetected;

    let mut lcc = Vec::new();
    for &[dt, dz, sigma] in &cfg.checks.separations {
        let r = check_lcc(a.as_ref(), &SeparationSpec::new(dt, dz, sigma)?, &tol, &q)?;
        pass &= r.pass;
        lcc.push(json!({ "dt": dt, "dz": dz, "sigma": sigma, "commutator_abs": r.commutator_abs, "classification": r.classification.as_str(), "pass": r.pass }));
    }
    let spectral = if cfg.checks.spectral_probes.is_empty() {
        Value::Null
    } else {
        let r = check_spectral(a.as_ref(), &cfg.checks.spectral_probes, &SpectralConfig::default(), &tol, &q)?;
        pass &= r.pass;
        json!({
            "probes": r.probes.iter().map(|p| json!({ "momentum": p.momentum, "in_cone": p.in_cone, "density": p.density })).collect::<Vec<_>>(),
            "max_outside_cone": r.max_outside_cone,
            "max_inside_cone": r.max_inside_cone,
            "pass": r.pass,
        })
    };
    let mut so11 = Vec::new();
    for &chi in &cfg.checks.rapidities {
        for (i, (f, g)) in pairs.iter().enumerate() {
            let r = check_so11(a.as_ref(), f, g, chi, &tol, &q)?;
            pass &= r.pass;
            so11.push(json!({ "pair": i, "rapidity": chi, "delta": r.delta, "pass": r.pass }));
        }
    }
    let t = &rep.tolerances;
    let mut resolved = resolved_suite(cfg, &q)?;
    resolved["tolerances"] = json!({
        "two_point_eq": t.two_point_eq,
        "current": t.current,
        "lcc_spacelike": t.lcc_spacelike,
        "so11": t.so11,
        "spectral_off_cone": t.spectral_off_cone,
        "spectral_detection": t.spectral_detection,
    });
    let results = json!({
        "theory_a": a.label(),
        "theory_b": b.label(),
        "two_point_deltas": rep.two_point_deltas,
        "max_delta": rep.max_delta,
        "current_a": rep.current_a,
        "current_b": rep.current_b,
        "current_mass": a.mass(),
        "lcc": lcc,
        "spectral": spectral,
        "so11": so11,
    });
    Ok(Report::new("haag-check", resolved, results, Some(rep.verdict.as_str().to_string()), pass))
}

pub fn converge(k_max: u32, cfg: &SuiteConfig) -> CliResult<Report> {
    let (f, g, dim) = match &cfg.polynomials {
        Some(src) => {
            if src.len() != 2 {
                return Err(CliError::Usage("converge needs exactly two polynomials".into()));
            }
            let dim = match &cfg.theta {
                Some(ThetaEntry::Matrix(rows)) => rows.len(),
                _ => 2,
            };
            let parse = |s: &String| parse_expr(s, dim).map_err(|e| expression_error(s, e));
            (Generator::Polynomial(parse(&src[0])?), Generator::Polynomial(parse(&src[1])?), dim)
        }
        None => {
            let fs = cfg.test_functions()?;
            if fs.len() < 2 {
                return Err(CliError::Usage("converge needs two test functions".into()));
            }
            let dim = fs[0].dim();
            (Generator::Gaussian(fs[0].clone()), Generator::Gaussian(fs[1].clone()), dim)
        }
    };
    let theta = cfg.theta(dim)?;
    let probes = match &cfg.probe_points {
        Some(p) => p.clone(),
        None => default_probes(&f, &g, dim),
    };
    let study = ConvergenceConfig::with_probes(probes.clone());
    let series = weak_convergence_study(&f, &g, &theta, k_max, &study)?;
    let mut resolved = resolved_suite(cfg, &cfg.quadrature_config()?)?;
    resolved["theta"] = json!(theta_rows(&theta));
    resolved["k_max"] = json!(k_max);
    resolved["probe_points"] = json!(probes);
    resolved["oracle_order"] = json!(study.oracle_order);
    resolved["reference_tol"] = json!(study.reference_tol);
    let results = json!({
        "degrees": series.degrees,
        "errors": series.errors,
        "tail_bounds": series.tail_bounds,
        "reference": series.reference,
        "reference_remainder": series.reference_remainder,
    });
    Ok(Report::new("converge", resolved, results, None, true))
}

fn default_probes(f: &Generator, g: &Generator, dim: usize) -> Vec<Vec<f64>> {
    match (f, g) {
        (Generator::Gaussian(a), Generator::Gaussian(b)) => {
            let mid = a.center().iter().zip(b.center()).map(|(x, y)| 0.5 * (x + y)).collect();
            vec![a.center().to_vec(), mid, b.center().to_vec()]
        }
        _ => vec![vec![0.0; dim], vec![0.5; dim]],
    }
}
