//! Exit criteria. Prints one PASS/FAIL line per criterion and exits non-zero
//! when any of them fails.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use uinf_core::monopole::{
    asymptotics, bogomolnyi_residuals, bps_profiles, energy, energy_correction, perturbation_solve, perturbed_profile,
    random_bump, random_direction, variational_check, MonopoleProfile, PrefactorParams, RadialGrid,
    SecondLineCoefficients,
};
use uinf_core::random::{random_config, random_field, random_field_no_zero_mode, random_scalar};
use uinf_core::reduction::{
    alpha_ordering, b_scaling_scan, born_infeld_reduction_check, masslessness_check, scalar_line_values,
    two_dim_exact_check, ym_line_values, Background, BlockMetric, ReductionReport,
};
use uinf_core::sphere::{bracket, product, su2_generators, HarmonicField};
use uinf_core::tensor::{suite_delta3, suite_delta4, suite_eps3, suite_eps4, EPS3_CONSTANT, EPS4_CONSTANT, KAPPA};

const IDENTITY_TOL: f64 = 1e-10;
const IDENTITY_SECONDS: f64 = 5.0;
const ALGEBRA_TOL: f64 = 1e-10;
const ALGEBRA_SECONDS: f64 = 10.0;
const MASTER_TOL: f64 = 1e-10;
const VANISHING_TOL: f64 = 1e-12;
const COVARIANT_TOL: f64 = 1e-9;
const MIN_EXPONENT: f64 = 1.95;
const BOGOMOLNYI_TOL: f64 = 1e-8;
const FIRST_LINE_TOL: f64 = 1e-4;
const MONOPOLE_SECONDS: f64 = 5.0;
const BOUND_SLACK: f64 = 1e-3;
const ORIGIN_EXPONENT: (f64, f64) = (2.0, 0.1);
const TAIL_SLOPE: (f64, f64) = (-1.0, 0.05);
const MIN_R_SQUARED: f64 = 0.9999;
const VARIATIONAL_TOL: f64 = 1e-6;

const XI_MAX: f64 = 25.0;
const N_POINTS: usize = 4000;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn magnitude(fields: &[&HarmonicField]) -> f64 {
    fields.iter().map(|f| f.max_abs()).fold(1.0, f64::max)
}

fn delta_expansion() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(1);
    let mut worst: f64 = 0.0;
    for n in 3..=8 {
        worst = worst.max(suite_delta3(&mut rng, n, 1000).unwrap().max_rel_err);
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst < IDENTITY_TOL && secs < IDENTITY_SECONDS,
        format!("dims 3-8, 1000 draws each: max_rel_err={worst:.3e} (< {IDENTITY_TOL:e}), {secs:.2} s (< {IDENTITY_SECONDS} s)"),
    )
}

/// Runs the binary with `args` into a fresh directory and returns the parsed file `name`.
fn run_json(args: &[&str], name: &str) -> Value {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_uinf"))
        .args(["--out", dir.path().to_str().unwrap()])
        .args(args)
        .output()
        .unwrap()
        .status;
    assert!(status.code().is_some(), "{args:?} was killed");
    serde_json::from_str(&std::fs::read_to_string(dir.path().join(name)).unwrap()).unwrap()
}

fn proportionality() -> Outcome {
    let mut rng = rng(2);
    let mut reports = Vec::new();
    for n in 4..=8 {
        reports.push(suite_delta4(&mut rng, n, 500).unwrap());
    }
    reports.push(suite_eps3(&mut rng, 500).unwrap());
    reports.push(suite_eps4(&mut rng, 500).unwrap());
    let spread = reports.iter().map(|r| r.max_rel_err).fold(0.0, f64::max);
    let pinned_ok = reports.iter().all(|r| {
        let (c, p) = (r.constant.unwrap(), r.pinned.unwrap());
        (c - p).abs() <= IDENTITY_TOL * p.abs()
    });
    let meta = &run_json(&["identities", "--dims", "4", "--trials", "2"], "identities.json")["meta"];
    let recorded = meta["kappa"].as_f64() == Some(KAPPA)
        && meta["eps3_constant"].as_f64() == Some(EPS3_CONSTANT)
        && meta["eps4_constant"].as_f64() == Some(EPS4_CONSTANT);
    outcome(
        spread < IDENTITY_TOL && pinned_ok && recorded,
        format!(
            "500 draws per ratio: max spread={spread:.3e} (< {IDENTITY_TOL:e}), constants {KAPPA}/{EPS3_CONSTANT}/{EPS4_CONSTANT} \
             match={pinned_ok}, recorded in report metadata={recorded}"
        ),
    )
}

fn bracket_algebra() -> Outcome {
    let start = Instant::now();
    let mut rng = rng(3);
    let (mut anti, mut jacobi, mut leibniz, mut reality): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    for _ in 0..4 {
        for l in 1..=6 {
            let lg = rng.gen_range(1..=6);
            let lh = rng.gen_range(1..=6);
            let f = random_field(&mut rng, l, 1.0);
            let g = random_field(&mut rng, lg, 1.0);
            let h = random_field(&mut rng, lh, 1.0);
            let fg = bracket(&f, &g);
            anti = anti.max((&fg + &bracket(&g, &f)).max_abs() / magnitude(&[&fg]));
            let t1 = bracket(&f, &bracket(&g, &h));
            let t2 = bracket(&g, &bracket(&h, &f));
            let t3 = bracket(&h, &fg);
            jacobi = jacobi.max((&(&t1 + &t2) + &t3).max_abs() / magnitude(&[&t1, &t2, &t3]));
            let lhs = bracket(&product(&f, &g), &h);
            let rhs = &product(&f, &bracket(&g, &h)) + &product(&bracket(&f, &h), &g);
            leibniz = leibniz.max((&lhs - &rhs).max_abs() / magnitude(&[&lhs, &rhs]));
            reality = reality.max(fg.reality_residual() / magnitude(&[&fg]));
        }
    }
    let su2 = su2_generators();
    let closure_ok = su2.closure.holds(ALGEBRA_TOL);
    let secs = start.elapsed().as_secs_f64();
    let worst = anti.max(jacobi).max(leibniz).max(reality);
    outcome(
        worst < ALGEBRA_TOL && closure_ok && secs < ALGEBRA_SECONDS,
        format!(
            "l_max <= 6: antisymmetry={anti:.1e} jacobi={jacobi:.1e} leibniz={leibniz:.1e} reality={reality:.1e} \
             (< {ALGEBRA_TOL:e}); su2 c={:.6} residual={:.1e}; {secs:.2} s (< {ALGEBRA_SECONDS} s)",
            su2.closure_constant(),
            su2.closure.residual
        ),
    )
}

/// Random Lorentzian spacetime metric and coupling for the reduction criteria.
fn random_point(rng: &mut ChaCha8Rng, d: usize) -> (BlockMetric, Background, f64) {
    let g: Vec<f64> =
        (0..d).map(|mu| if mu == 0 { -rng.gen_range(0.5..2.0) } else { rng.gen_range(0.5..2.0) }).collect();
    let b = rng.gen_range(0.1..1.0);
    let e = rng.gen_range(0.5..3.0);
    (BlockMetric::new(g, b).unwrap(), Background::for_coupling(e, b).unwrap(), e)
}

/// Scalar and Yang-Mills reports at 50 random configurations per `D`.
fn reduction_reports() -> BTreeMap<usize, Vec<ReductionReport>> {
    let mut rng = rng(4);
    let mut out = BTreeMap::new();
    for d in 2..=4 {
        let mut reports = Vec::new();
        for _ in 0..50 {
            let (metric, bg, e) = random_point(&mut rng, d);
            let l = rng.gen_range(1..=2);
            let cfg = random_config(&mut rng, d, l, e, 0.5);
            let s = random_scalar(&mut rng, d, l, 0.5);
            reports.push(scalar_line_values(&cfg, &s, &bg, &metric).unwrap());
            reports.push(ym_line_values(&cfg, &bg, &metric).unwrap());
        }
        out.insert(d, reports);
    }
    out
}

fn master_identity(reports: &BTreeMap<usize, Vec<ReductionReport>>) -> Outcome {
    let mut worst: f64 = 0.0;
    for r in reports.values().flatten() {
        worst = worst.max(r.residuals.master).max(r.residuals.master_delta4.unwrap_or(0.0));
    }
    let count = reports.values().map(Vec::len).min().unwrap_or(0) / 2;
    outcome(
        worst < MASTER_TOL && count >= 50,
        format!("D in 2,3,4 with {count} configurations per model: max residual={worst:.3e} (< {MASTER_TOL:e})"),
    )
}

fn vanishing_groups(reports: &BTreeMap<usize, Vec<ReductionReport>>) -> Outcome {
    let worst = reports
        .values()
        .flatten()
        .flat_map(|r| r.residuals.vanishing.iter().map(|v| v.relative))
        .fold(0.0, f64::max);
    outcome(
        worst < VANISHING_TOL,
        format!("groups with three or more extra indices: max relative={worst:.3e} (< {VANISHING_TOL:e})"),
    )
}

fn covariant_groups(reports: &BTreeMap<usize, Vec<ReductionReport>>) -> Outcome {
    let worst = reports.values().flatten().map(|r| r.residuals.covariant).fold(0.0, f64::max);
    let mut rng = rng(6);
    let mut two_dim_ok = true;
    let mut two_dim_worst: f64 = 0.0;
    for _ in 0..5 {
        let q = rng.gen_range(0.3..2.0);
        let cfg = random_config(&mut rng, 2, 2, q, 0.7);
        let r = two_dim_exact_check(&cfg, &Background::new(q).unwrap(), &[0.5, 0.2, 0.05]).unwrap();
        two_dim_ok &= r.passes(COVARIANT_TOL);
        for row in &r.rows {
            two_dim_worst = two_dim_worst.max(row.residual).max(row.group_0_relative).max(row.group_1_relative);
        }
    }
    outcome(
        worst < COVARIANT_TOL && two_dim_ok,
        format!(
            "covariant residual={worst:.3e}, two-dimensional residual and leftover groups={two_dim_worst:.3e} \
             (< {COVARIANT_TOL:e})"
        ),
    )
}

fn degenerate_scaling() -> Outcome {
    let mut rng = rng(7);
    let b_list = [0.4, 0.2, 0.1, 0.05];
    let g = [-1.0, 1.0, 1.0];
    let cfg = random_config(&mut rng, 3, 2, 2.0, 0.5);
    let s = random_scalar(&mut rng, 3, 2, 0.5);
    let scalar = b_scaling_scan(&cfg, Some(&s), 2.0, &g, &b_list).unwrap();
    let ym = b_scaling_scan(&cfg, None, 2.0, &g, &b_list).unwrap();
    let p = |t: &uinf_core::reduction::ScanTable| t.fit_exponent.unwrap_or(f64::NAN);
    outcome(
        p(&scalar) >= MIN_EXPONENT && p(&ym) >= MIN_EXPONENT,
        format!("b in [0.05, 0.4]: scalar p={:.4}, ym p={:.4} (>= {MIN_EXPONENT})", p(&scalar), p(&ym)),
    )
}

fn masslessness() -> Outcome {
    let mut rng = rng(8);
    let mut worst: f64 = 0.0;
    let mut exact = true;
    for d in 2..=4 {
        for _ in 0..5 {
            let (metric, bg, _) = random_point(&mut rng, d);
            let phi = random_field_no_zero_mode(&mut rng, 2, 1.0);
            let m = masslessness_check(&phi, &bg, &metric).unwrap();
            exact &= m.passes();
            worst = worst.max(m.relative);
        }
    }
    outcome(exact, format!("no spacetime derivatives, nonzero modes: max value/terms={worst:.3e}"))
}

fn base_profile() -> MonopoleProfile {
    bps_profiles(&RadialGrid::new(XI_MAX, N_POINTS).unwrap())
}

fn bps_monopole() -> Outcome {
    let start = Instant::now();
    let base = base_profile();
    let (rk, rh) = bogomolnyi_residuals(&base);
    let e = energy(&base, 0.0, &PrefactorParams::default(), &SecondLineCoefficients::default()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let dev = (e.e0_integral - 1.0).abs();
    outcome(
        rk < BOGOMOLNYI_TOL && rh < BOGOMOLNYI_TOL && dev < FIRST_LINE_TOL && secs < MONOPOLE_SECONDS,
        format!(
            "residuals {rk:.1e} {rh:.1e} (< {BOGOMOLNYI_TOL:e}); first line={:.8} (|x - 1| < {FIRST_LINE_TOL:e}) \
             at cutoff {XI_MAX}, n={N_POINTS}; {secs:.2} s (< {MONOPOLE_SECONDS} s)",
            e.e0_integral
        ),
    )
}

fn energy_dominance() -> Outcome {
    let mut rng = rng(10);
    let base = base_profile();
    let c = SecondLineCoefficients::default();
    let mut lowest = f64::INFINITY;
    let mut min_second = f64::INFINITY;
    for _ in 0..100 {
        let p = perturbed_profile(&base, random_bump(&mut rng, XI_MAX), random_bump(&mut rng, XI_MAX));
        let e = energy(&p, 0.0, &PrefactorParams::default(), &c).unwrap();
        lowest = lowest.min(e.e0_integral);
        min_second = min_second.min(e.min_second_line_integrand);
    }
    outcome(
        lowest >= 1.0 - BOUND_SLACK && min_second >= 0.0,
        format!(
            "100 perturbed profiles: min first line={lowest:.6} (>= {}), min second-line integrand={min_second:.3e} (>= 0)",
            1.0 - BOUND_SLACK
        ),
    )
}

fn perturbation_asymptotics() -> Outcome {
    let base = base_profile();
    let c = SecondLineCoefficients::default();
    let p = perturbation_solve(&base, 0.1f64.powi(4) / 30.0, &c).unwrap();
    let a = asymptotics(&p);
    let slope = |f: Option<uinf_core::stats::LinearFit>| f.map_or(f64::NAN, |f| f.slope);
    let (ok_, hk) = (slope(a.origin_k1), slope(a.origin_h1));
    let tail = slope(a.tail_k1);
    let near = |v: f64, (target, tol): (f64, f64)| (v - target).abs() <= tol;
    let origin_ok = near(ok_, ORIGIN_EXPONENT) && near(hk, ORIGIN_EXPONENT);
    let tail_ok = near(tail, TAIL_SLOPE);
    let scan = energy_correction(&base, &[0.1, 0.2, 0.3, 0.4, 0.5], &PrefactorParams::default(), &c).unwrap();
    let r2 = scan.r_squared.unwrap_or(f64::NAN);
    outcome(
        origin_ok && tail_ok && r2 > MIN_R_SQUARED,
        format!(
            "origin exponents K1={ok_:.4} H1={hk:.4} ({} +- {}) ok={origin_ok}; K1 tail slope={tail:.4} on [{}, {}] \
             ({} +- {}) ok={tail_ok}; dE/E0 vs epsilon R^2={r2:.10} (> {MIN_R_SQUARED})",
            ORIGIN_EXPONENT.0, ORIGIN_EXPONENT.1, a.tail_window.0, a.tail_window.1, TAIL_SLOPE.0, TAIL_SLOPE.1
        ),
    )
}

fn variational() -> Outcome {
    let mut rng = rng(12);
    let base = base_profile();
    let c = SecondLineCoefficients::default();
    let epsilon = 0.5f64.powi(4) / 30.0;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let p = perturbed_profile(&base, random_bump(&mut rng, XI_MAX), random_bump(&mut rng, XI_MAX));
        let dk = random_direction(&mut rng, p.grid.xi());
        let dh = random_direction(&mut rng, p.grid.xi());
        worst = worst.max(variational_check(&p, &dk, &dh, &c, epsilon).unwrap().rel_diff);
    }
    outcome(
        worst < VARIATIONAL_TOL,
        format!("100 profile/direction pairs: max relative difference={worst:.3e} (< {VARIATIONAL_TOL:e})"),
    )
}

fn born_infeld() -> Outcome {
    let mut rng = rng(13);
    let g = [-1.0, 1.0, 1.0];
    let cfg = random_config(&mut rng, 3, 2, 1.0, 0.2);
    let t = born_infeld_reduction_check(&cfg, 1.0, &g, 0.5, 1.0, &[0.4, 0.2, 0.1, 0.05]).unwrap();
    let o = alpha_ordering(&cfg, 1.0, &g, 0.3, 1.0, 1.0, &[0.03, 0.01, 0.003, 0.001]).unwrap();
    let drifts: Vec<String> = t.rows.iter().filter_map(|r| r.drift).map(|d| format!("{d:.2e}")).collect();
    let last = o.rows.last().map_or(f64::NAN, |r| r.suppression);
    outcome(
        t.converging && o.suppressed,
        format!(
            "drifts [{}] decreasing={}; bracket share ratio falls to {last:.2e} as alpha -> 0, suppressed={}",
            drifts.join(", "),
            t.converging,
            o.suppressed
        ),
    )
}

fn files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), std::fs::read(e.path()).unwrap())
        })
        .collect()
}

fn determinism() -> Outcome {
    let commands: [&[&str]; 6] = [
        &["identities", "--dims", "3,4", "--trials", "50"],
        &["reduce", "ym", "--D", "3", "--trials", "2"],
        &["reduce", "scan-b", "--b-list", "0.4,0.2,0.1"],
        &["reduce", "born-infeld", "--b-list", "0.4,0.2", "--alpha-list", "0.01,0.003"],
        &["algebra", "structure-constants", "--lmax", "2"],
        &["monopole", "scan-evb", "--n", "1000", "--evb-list", "0.1,0.2"],
    ];
    let mut mismatched = Vec::new();
    let mut count = 0;
    for args in commands {
        let runs: Vec<_> = (0..2)
            .map(|_| {
                let dir = tempfile::tempdir().unwrap();
                let status = Command::new(env!("CARGO_BIN_EXE_uinf"))
                    .args(["--seed", "17", "--out", dir.path().to_str().unwrap()])
                    .args(args)
                    .output()
                    .unwrap()
                    .status;
                (status.code(), files(dir.path()))
            })
            .collect();
        count += runs[0].1.len();
        if runs[0] != runs[1] || runs[0].1.is_empty() {
            mismatched.push(args.join(" "));
        }
    }
    outcome(
        mismatched.is_empty(),
        format!("{} commands run twice with seed 17, {count} files compared, mismatches: {mismatched:?}", commands.len()),
    )
}

fn main() {
    let reports = reduction_reports();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("delta-expansion identity", Box::new(delta_expansion)),
        ("proportionality constants", Box::new(proportionality)),
        ("bracket algebra", Box::new(bracket_algebra)),
        ("reduction master identity", Box::new(|| master_identity(&reports))),
        ("vanishing groups", Box::new(|| vanishing_groups(&reports))),
        ("covariant-group identities", Box::new(|| covariant_groups(&reports))),
        ("degenerate-limit scaling", Box::new(degenerate_scaling)),
        ("masslessness", Box::new(masslessness)),
        ("BPS monopole", Box::new(bps_monopole)),
        ("energy dominance", Box::new(energy_dominance)),
        ("perturbation asymptotics", Box::new(perturbation_asymptotics)),
        ("variational check", Box::new(variational)),
        ("Born-Infeld limit", Box::new(born_infeld)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("{} {:>2} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, i + 1, o.detail);
        if !o.passed {
            failed.push(i + 1);
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed.len(), criteria.len());
    if !failed.is_empty() {
        println!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
