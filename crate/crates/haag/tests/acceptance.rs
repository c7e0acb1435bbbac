//! Acceptance suite: one PASS/FAIL line per criterion, then a single
//! assertion over all of them so every line is printed even on failure.

use std::f64::consts::PI;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use haag_core::expr::{MultiIndex, Term, Wave};
use haag_core::harness::convergence::{weak_convergence_study, ConvergenceConfig, Generator};
use haag_core::harness::*;
use haag_core::wightman::{smeared_two_point, QuadratureConfig};
use haag_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn q() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn coordinate_commutator() -> Outcome {
    let t = ThetaMatrix::space_space(4, 0.7).unwrap();
    let mut worst: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            let comm = moyal_commutator(&Expr::coord(4, mu).unwrap(), &Expr::coord(4, nu).unwrap(), &t).unwrap();
            // [x^mu, x^nu] = i θ^{mu nu}, with θ^{12} = -θ^{21} = 0.7
            let th = match (mu, nu) {
                (1, 2) => 0.7,
                (2, 1) => -0.7,
                _ => 0.0,
            };
            let diff = comm.sub(&Expr::constant(4, c(0.0, th))).unwrap().l1_norm();
            worst = worst.max(diff);
        }
    }
    outcome(worst <= 1e-12, format!("16 pairs, max deviation {worst:e}"))
}

fn convergence_threshold() -> Outcome {
    let mut correct = 0;
    let mut total = 0;
    for &(beta, expect) in &[(0.1, true), (0.2, true), (0.3, true), (0.4, true), (0.49, true), (0.51, false), (0.6, false), (0.75, false), (0.9, false)] {
        for b in [0.5, 1.0, 2.0] {
            for norm in [0.1, 1.0, 10.0] {
                let g = GevreyBound::new(1.0, b, beta).unwrap();
                let cert = certify_convergence(&g, &g, &ThetaMatrix::planar(norm).unwrap());
                let want = if expect { Verdict::Converges } else { Verdict::Diverges };
                total += 1;
                if cert.verdict == want {
                    correct += 1;
                }
            }
        }
    }
    outcome(correct == total, format!("{correct}/{total} verdicts correct"))
}

fn random_wave(rng: &mut ChaCha8Rng, dim: usize, radius: f64) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-radius..=radius)).collect();
        if v.iter().map(|x| x * x).sum::<f64>().sqrt() <= radius {
            return v;
        }
    }
}

fn plane_wave_resummation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        // alternate the commuting plane and the space-space block of d = 4
        let (dim, theta) = if i % 2 == 0 {
            (2, ThetaMatrix::planar(rng.gen_range(-1.0..=1.0)).unwrap())
        } else {
            (4, ThetaMatrix::space_space(4, rng.gen_range(-1.0..=1.0)).unwrap())
        };
        let k = random_wave(&mut rng, dim, 2.0);
        let p = random_wave(&mut rng, dim, 2.0);
        let partial = star_product(&[Expr::plane_wave(&k), Expr::plane_wave(&p)], &theta, &StarConfig::fixed(30)).unwrap();
        // e^{ikx} ⋆ e^{ipx} = exp(-(i/2) k_mu θ^{mu nu} p_nu) e^{i(k+p)x}
        let mut ktp = 0.0;
        for mu in 0..dim {
            for nu in 0..dim {
                ktp += k[mu] * theta.get(mu, nu) * p[nu];
            }
        }
        let sum: Vec<f64> = k.iter().zip(&p).map(|(a, b)| a + b).collect();
        let oracle = Expr::plane_wave(&sum).scale(c(0.0, -0.5 * ktp).exp());
        let (phase, wave) = plane_wave_star(&k, &p, &theta).unwrap();
        let closed = Expr::plane_wave(&wave).scale(phase);
        worst = worst
            .max(partial.value.sub(&oracle).unwrap().l1_norm())
            .max(closed.sub(&oracle).unwrap().l1_norm());
    }
    outcome(worst < 1e-10, format!("100 pairs at N = 30, max deviation {worst:e}"))
}

fn random_poly(rng: &mut ChaCha8Rng) -> Expr {
    let n = rng.gen_range(1..=5);
    let terms = (0..n)
        .map(|_| {
            let a = rng.gen_range(0..=4u32);
            let b = rng.gen_range(0..=4 - a);
            let re = rng.gen_range(-3..=3) as f64;
            let im = rng.gen_range(-3..=3) as f64;
            Term::new(c(re, im), MultiIndex::new(vec![a, b]), Wave::zero(2))
        })
        .collect();
    Expr::from_terms(2, terms)
}

/// Harmonics of the box `[0, 2 pi]^2`.
fn random_box_waves(rng: &mut ChaCha8Rng) -> Expr {
    let n = rng.gen_range(1..=3);
    let terms = (0..n)
        .map(|_| {
            let k = vec![rng.gen_range(-3..=3) as f64, rng.gen_range(-3..=3) as f64];
            let re = rng.gen_range(-3..=3) as f64;
            let im = rng.gen_range(-3..=3) as f64;
            Term::new(c(re, im), MultiIndex::zero(2), Wave::new(k))
        })
        .collect();
    Expr::from_terms(2, terms)
}

fn associativity_and_traciality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let theta = ThetaMatrix::planar(0.75).unwrap();
    let domain = BoxDomain::cube(2, 2.0 * PI).unwrap();
    let assoc = |f: &Expr, g: &Expr, h: &Expr| {
        let left = star(&star(f, g, &theta).unwrap(), h, &theta).unwrap();
        let right = star(f, &star(g, h, &theta).unwrap(), &theta).unwrap();
        let scale = left.l1_norm().max(right.l1_norm()).max(1.0);
        left.approx_eq(&right, 1e-12 * scale)
    };
    let mut poly_ok = 0;
    for _ in 0..200 {
        let (f, g, h) = (random_poly(&mut rng), random_poly(&mut rng), random_poly(&mut rng));
        poly_ok += assoc(&f, &g, &h) as usize;
    }
    let mut wave_ok = 0;
    for _ in 0..200 {
        let (f, g, h) = (random_box_waves(&mut rng), random_box_waves(&mut rng), random_box_waves(&mut rng));
        wave_ok += assoc(&f, &g, &h) as usize;
    }
    let mut trace_ok = 0;
    for _ in 0..100 {
        let (f, g) = (random_box_waves(&mut rng), random_box_waves(&mut rng));
        let deformed = box_integral(&star(&f, &g, &theta).unwrap(), &domain).unwrap();
        let plain = box_integral(&f.multiply(&g).unwrap(), &domain).unwrap();
        trace_ok += ((deformed - plain).norm() <= 1e-12 * (1.0 + plain.norm())) as usize;
    }
    outcome(
        poly_ok == 200 && wave_ok == 200 && trace_ok == 100,
        format!("associative {poly_ok}/200 polynomial, {wave_ok}/200 plane-wave; tracial {trace_ok}/100"),
    )
}

fn haag_chain() -> Outcome {
    let tol = Tolerances::default();
    let pairs = standard_pairs().unwrap();
    let a = TheorySpec::new("A", 1.0).unwrap();
    let same = haag_verdict(&a, &TheorySpec::new("B", 1.0).unwrap(), &pairs, &tol, &q()).unwrap();
    let heavier = haag_verdict(&a, &TheorySpec::new("B", 1.5).unwrap(), &pairs, &tol, &q()).unwrap();
    let mock = MockTheory::copying("mock", &a).with_current(1.0);
    let injected = haag_verdict(&a, &mock, &pairs, &tol, &q()).unwrap();
    let ok_same = same.verdict == HaagVerdict::ConsistentBothTrivial
        && same.max_delta < 1e-8
        && same.current_a < 1e-10
        && same.current_b < 1e-10;
    let ok_heavier = heavier.verdict == HaagVerdict::InapplicablePremiseFails && heavier.max_delta > 1e-3;
    let ok_mock = injected.verdict == HaagVerdict::ViolationDetected;
    outcome(
        ok_same && ok_heavier && ok_mock && pairs.len() == 5,
        format!(
            "(1,1) {} delta {:e}; (1,1.5) {} gap {:.3e}; mock {}",
            same.verdict.as_str(),
            same.max_delta,
            heavier.verdict.as_str(),
            heavier.max_delta,
            injected.verdict.as_str()
        ),
    )
}

fn current_factorization() -> Outcome {
    let t = TheorySpec::new("A", 1.0).unwrap();
    let mut worst: f64 = 0.0;
    for (f, _) in standard_pairs().unwrap() {
        let w = smeared_two_point(&f, &f, t.field(), &q()).unwrap().re;
        let j = t.current_norm(2.0, &f, &q()).unwrap();
        // (M^2 - m^2)^2 = (4 - 1)^2
        worst = worst.max((j / w - 9.0).abs());
    }
    outcome(worst < 1e-9, format!("5 Gaussians, max |ratio - 9| = {worst:e}"))
}

fn local_commutativity() -> Outcome {
    let t = TheorySpec::new("A", 1.0).unwrap();
    let tol = Tolerances::default();
    let mut worst: f64 = 0.0;
    let mut all_spacelike = true;
    for i in 1..=5 {
        for j in 9..=15 {
            let sep = SeparationSpec::new(0.1 * i as f64, 0.1 * j as f64, 0.05).unwrap();
            let r = check_lcc(&t, &sep, &tol, &q()).unwrap();
            all_spacelike &= r.classification == Separation::Spacelike;
            worst = worst.max(r.commutator_abs);
        }
    }
    // timelike control with σ = 0.25; at σ = 0.05 the peak-normalized
    // Gaussians carry too little weight for a 1e-3 commutator
    let control = check_lcc(&t, &SeparationSpec::new(1.0, 0.0, 0.25).unwrap(), &tol, &q()).unwrap();
    outcome(
        all_spacelike && worst < 1e-6 && control.commutator_abs > 1e-3,
        format!("35 spacelike, max {worst:e}; timelike control {:.3e}", control.commutator_abs),
    )
}

fn spectral_condition() -> Outcome {
    let t = TheorySpec::new("A", 1.0).unwrap();
    let tol = Tolerances::default();
    let cfg = SpectralConfig::default();
    let shell = |k: f64| [(k * k + 1.0f64).sqrt(), k];
    let off = [[0.5, 1.0], [0.2, 0.8], [0.0, 0.5]];
    let on = [shell(0.0), shell(0.7), shell(-1.2)];
    let probes: Vec<[f64; 2]> = off.iter().chain(&on).copied().collect();
    let r = check_spectral(&t, &probes, &cfg, &tol, &q()).unwrap();
    let on_ok = r.probes[3..].iter().all(|p| p.in_cone && p.density > tol.spectral_detection);
    let mock = MockTheory::copying("tachyon", &t).with_atom([0.5, 1.0], 1e-3);
    let flagged = !check_spectral(&mock, &probes, &cfg, &tol, &q()).unwrap().pass;
    let min_on = r.probes[3..].iter().fold(f64::INFINITY, |m, p| m.min(p.density));
    outcome(
        r.pass && r.max_outside_cone < 1e-6 && on_ok && flagged,
        format!("off-cone max {:e}; on-shell min {min_on:.3}; injected support flagged: {flagged}", r.max_outside_cone),
    )
}

fn boost_invariance() -> Outcome {
    let tol = Tolerances::default();
    let pairs = &standard_pairs().unwrap()[..3];
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for m in [0.5, 1.0, 2.0] {
        let t = TheorySpec::new("A", m).unwrap();
        for chi in [0.25, -0.25, 0.5, -0.5, 1.0, -1.0] {
            for (f, g) in pairs {
                worst = worst.max(check_so11(&t, f, g, chi, &tol, &q()).unwrap().delta);
                count += 1;
            }
        }
    }
    outcome(worst < 1e-6, format!("{count} boosts, max delta {worst:e}"))
}

fn weak_convergence() -> Outcome {
    let theta = ThetaMatrix::planar(0.5).unwrap();
    let one = Expr::constant(2, c(1.0, 0.0));
    let f = GaussianTestFn::new(vec![0.0, 0.0], vec![1.5, 1.5], vec![0.4, 0.0], one.clone()).unwrap();
    let g = GaussianTestFn::new(vec![0.1, 0.0], vec![1.5, 1.5], vec![0.0, 0.4], one).unwrap();
    let probes = vec![vec![0.0, 0.0], vec![0.3, -0.2], vec![-0.25, 0.4]];
    let cfg = ConvergenceConfig::with_probes(probes.clone());
    let s = weak_convergence_study(&Generator::Gaussian(f), &Generator::Gaussian(g), &theta, 16, &cfg).unwrap();
    let monotone = s.errors[6..].windows(2).all(|w| w[1] < w[0]);
    let pf = parse_expr("x0^3 - 2*x0*x1 + 0.5*x1^2 + x1 - 1", 2).unwrap();
    let pg = parse_expr("x1^3 + 2*x0^2*x1 - x0 + 3", 2).unwrap();
    let mut pcfg = ConvergenceConfig::with_probes(probes);
    pcfg.domain = Some(BoxDomain::cube(2, 1.5).unwrap());
    let ps = weak_convergence_study(&Generator::Polynomial(pf), &Generator::Polynomial(pg), &theta, 8, &pcfg).unwrap();
    let exact = ps.errors[3..].iter().all(|&e| e == 0.0);
    outcome(
        s.errors[16] < 1e-6 && monotone && exact,
        format!("Gaussian e_16 = {:e}, monotone from k = 6: {monotone}; polynomial e_k = 0 for k >= 3: {exact}", s.errors[16]),
    )
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_haag")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), out.stdout, out.stderr)
}

fn cli_contract() -> Outcome {
    let cases: [(&[&str], i32); 3] = [
        (&["star", "--no-timestamp", "--theta", "1.0", "--dim", "2", "x0", "x1"], 0),
        (&["certify", "--no-timestamp", "--beta", "0.6", "--B", "1", "--C", "1", "--theta", "1"], 0),
        (&["star", "--no-timestamp", "--dim", "2", "x0**"], 2),
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for (args, want) in cases {
        let first = run_cli(args);
        let second = run_cli(args);
        let stable = first == second;
        let fields = match args[0] {
            "star" if want == 0 => {
                let v: serde_json::Value = serde_json::from_slice(&first.1).unwrap();
                v["results"]["result"] == "x0*x1 + 0.5i" && v["results"]["terminated"] == true
            }
            "certify" => {
                let v: serde_json::Value = serde_json::from_slice(&first.1).unwrap();
                v["verdict"] == "diverges"
            }
            _ => String::from_utf8_lossy(&first.2).contains("position 3"),
        };
        ok &= first.0 == want && stable && fields;
        notes.push(format!("{} exit {}", args[0], first.0));
    }
    outcome(ok, notes.join(", "))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, Duration, fn() -> Outcome); 11] = [
        ("coordinate commutator", Duration::from_secs(1), coordinate_commutator),
        ("convergence threshold", Duration::from_secs(1), convergence_threshold),
        ("plane-wave resummation", Duration::from_secs(10), plane_wave_resummation),
        ("associativity and traciality", Duration::from_secs(30), associativity_and_traciality),
        ("haag chain", Duration::from_secs(60), haag_chain),
        ("current factorization", Duration::from_secs(10), current_factorization),
        ("local commutativity", Duration::from_secs(60), local_commutativity),
        ("spectral condition", Duration::from_secs(60), spectral_condition),
        ("SO(1,1) invariance", Duration::from_secs(60), boost_invariance),
        ("weak convergence", Duration::from_secs(120), weak_convergence),
        ("CLI contract", Duration::from_secs(60), cli_contract),
    ];
    let mut failed = Vec::new();
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = check();
        let elapsed = start.elapsed();
        let pass = out.pass && elapsed < *budget;
        // straight to the process stdout so the lines survive output capture
        let mut stdout = std::io::stdout().lock();
        writeln!(
            stdout,
            "criterion {:>2}: {} | {name} | {} | {:.2}s of {}s",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        )
        .unwrap();
        if !pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
