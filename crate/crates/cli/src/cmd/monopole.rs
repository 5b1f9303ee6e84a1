use serde_json::json;
use uinf_core::monopole::{
    asymptotics, bogomolnyi_residuals, bps_profiles, energy as energy_of, energy_correction, energy_scan_csv,
    perturbation_solve, profile_csv, MonopoleConfig, RadialGrid, BOGOMOLNYI_TOL, FIRST_LINE_TOL, ORIGIN_EXPONENT,
    ORIGIN_EXPONENT_TOL, TAIL_SLOPE, TAIL_SLOPE_TOL,
};
use uinf_core::stats::power_law_fit;

use super::{verdict, Ctx};
use crate::settings::require_positive;
use crate::{compute, Failure, MonopoleArgs, MonopoleEnergyArgs, MonopoleEvbArgs, MonopoleScanArgs};

fn config(ctx: &Ctx, a: &MonopoleArgs) -> Result<MonopoleConfig, Failure> {
    let mut c = MonopoleConfig::default();
    c.apply(ctx.settings.raw()).map_err(|e| Failure::Config(e.to_string()))?;
    let p = &mut c.params;
    for (slot, flag) in [(&mut p.v, a.v), (&mut p.beta, a.beta), (&mut p.e, a.e), (&mut p.b, a.b)] {
        if let Some(v) = flag {
            *slot = v;
        }
    }
    for (slot, flag) in [(&mut c.xi_max, a.xi_max), (&mut c.xi_min, a.xi_min), (&mut c.grading, a.grading)] {
        if let Some(v) = flag {
            *slot = v;
        }
    }
    if let Some(n) = a.n {
        c.n_points = n;
    }
    c.validate().map_err(|e| Failure::Config(e.to_string()))?;
    Ok(c)
}

fn grid_meta(c: &MonopoleConfig) -> serde_json::Value {
    json!({ "n_points": c.n_points, "xi_min": c.xi_min, "xi_max": c.xi_max, "grading": c.grading })
}

fn evb(ctx: &Ctx, flag: Option<f64>, default: f64) -> Result<f64, Failure> {
    let v = ctx.settings.opt_f64(flag, "evb")?.unwrap_or(default);
    if !(v >= 0.0 && v.is_finite()) {
        return Err(Failure::Config(format!("evb must be non-negative, got {v}")));
    }
    Ok(v)
}

fn warn(w: &[String]) {
    for m in w {
        eprintln!("warning: {m}");
    }
}

pub fn solve(ctx: &mut Ctx, a: &MonopoleEvbArgs) -> Result<bool, Failure> {
    let c = config(ctx, &a.grid)?;
    let evb = evb(ctx, a.evb, 0.0)?;
    let base = bps_profiles(&c.grid().map_err(compute)?);
    let e = energy_of(&base, evb, &c.params, &c.coefficients).map_err(compute)?;
    warn(&e.warnings);
    let pert = perturbation_solve(&base, e.epsilon, &c.coefficients).map_err(compute)?;
    let (rk, rh) = bogomolnyi_residuals(&base);
    let bog_ok = rk < BOGOMOLNYI_TOL && rh < BOGOMOLNYI_TOL;
    let e0_ok = (e.e0_integral - 1.0).abs() < FIRST_LINE_TOL;
    let passed = bog_ok && e0_ok;
    println!("Bogomol'nyi residuals {rk:.3e} {rh:.3e} {}", verdict(bog_ok));
    println!(
        "first-line integral {:.4} (truncated {:.4}, tail {:.4}, cutoff {}) {}",
        e.e0_integral,
        e.e0_truncated,
        e.tail,
        e.cutoff,
        verdict(e0_ok)
    );
    let report = json!({
        "meta": ctx.meta("monopole solve", grid_meta(&c)),
        "parameters": c,
        "energy": e,
        "bogomolnyi_residuals": [rk, rh],
        "boundary_defects": base.boundary_defects(),
        "passed": passed,
    });
    ctx.out.text("monopole_profiles.csv", profile_csv(&base, Some(&pert)));
    ctx.out.json("monopole_solve.json", &report);
    Ok(passed)
}

pub fn energy(ctx: &mut Ctx, a: &MonopoleEnergyArgs) -> Result<bool, Failure> {
    let c = config(ctx, &a.grid)?;
    let evb = evb(ctx, a.evb, 0.1)?;
    let cutoffs = ctx.settings.positive_list(a.cutoffs.as_deref(), "cutoffs", &[10.0, 15.0, 20.0, 25.0])?;
    let base = bps_profiles(&c.grid().map_err(compute)?);
    let e = energy_of(&base, evb, &c.params, &c.coefficients).map_err(compute)?;
    warn(&e.warnings);
    let mut rows = Vec::new();
    for &cut in &cutoffs {
        require_positive("cutoffs", cut - c.xi_min)?;
        let n = ((c.n_points as f64 * cut / c.xi_max).round() as usize).max(12);
        let grid = RadialGrid::graded(c.xi_min, cut, n, c.grading).map_err(compute)?;
        let ec = energy_of(&bps_profiles(&grid), evb, &c.params, &c.coefficients).map_err(compute)?;
        println!(
            "cutoff {cut}: E0_integral={:.12} correction_integral={:.10e}",
            ec.e0_integral, ec.correction_integral
        );
        rows.push(json!({
            "cutoff": cut, "n_points": n, "E0_integral": ec.e0_integral, "correction_integral": ec.correction_integral,
        }));
    }
    let cut_x: Vec<f64> = cutoffs.clone();
    let cut_y: Vec<f64> = rows.iter().map(|r| r["correction_integral"].as_f64().unwrap_or(f64::NAN)).collect();
    let growth = power_law_fit(&cut_x, &cut_y);
    let e0_ok = (e.e0_integral - 1.0).abs() < FIRST_LINE_TOL;
    let positive = e.min_first_line_integrand >= 0.0 && e.min_second_line_integrand >= 0.0;
    let passed = e0_ok && positive;
    println!(
        "E0_integral={:.12} correction_integral={:.10e} epsilon={:.6e} total={:.10e} prefactor={:.10e} {}",
        e.e0_integral,
        e.correction_integral,
        e.epsilon,
        e.total,
        e.prefactor,
        verdict(passed)
    );
    if let Some(g) = growth {
        println!("second-line integral grows as cutoff^{:.4}", g.slope);
    }
    let report = json!({
        "meta": ctx.meta("monopole energy", grid_meta(&c)),
        "parameters": c,
        "energy": e,
        "cutoff_dependence": rows,
        "correction_growth_exponent": growth.map(|g| g.slope),
        "passed": passed,
    });
    ctx.out.json("monopole_energy.json", &report);
    Ok(passed)
}

pub fn perturb(ctx: &mut Ctx, a: &MonopoleEvbArgs) -> Result<bool, Failure> {
    let c = config(ctx, &a.grid)?;
    let evb = evb(ctx, a.evb, 0.1)?;
    let base = bps_profiles(&c.grid().map_err(compute)?);
    let p = perturbation_solve(&base, evb.powi(4) / 30.0, &c.coefficients).map_err(compute)?;
    let asy = asymptotics(&p);
    let slope = |f: Option<uinf_core::stats::LinearFit>| f.map_or(f64::NAN, |f| f.slope);
    let origin_ok = asy.origin_passes();
    let tail_ok = asy.tail_passes();
    println!(
        "origin exponents K1={:.4} H1={:.4} (expected {ORIGIN_EXPONENT} ± {ORIGIN_EXPONENT_TOL}) {}",
        slope(asy.origin_k1),
        slope(asy.origin_h1),
        verdict(origin_ok)
    );
    println!(
        "tail slope of ln|K1| on [{}, {}] = {:.4} (expected {TAIL_SLOPE} ± {TAIL_SLOPE_TOL}) {}",
        asy.tail_window.0,
        asy.tail_window.1,
        slope(asy.tail_k1),
        verdict(tail_ok)
    );
    println!(
        "pivots [{:.3e}, {:.3e}], dilatation mode interior residual {:.3e}, boundary slope {:.6}",
        p.min_pivot, p.max_pivot, p.dilatation_interior_residual, p.dilatation_boundary_slope
    );
    let passed = origin_ok && tail_ok;
    let report = json!({
        "meta": ctx.meta("monopole perturb", grid_meta(&c)),
        "parameters": c,
        "evb": evb,
        "epsilon": p.epsilon,
        "asymptotics": asy,
        "min_pivot": p.min_pivot,
        "max_pivot": p.max_pivot,
        "dilatation_interior_residual": p.dilatation_interior_residual,
        "dilatation_boundary_slope": p.dilatation_boundary_slope,
        "origin_passed": origin_ok,
        "tail_passed": tail_ok,
        "passed": passed,
    });
    ctx.out.text("monopole_perturbation.csv", profile_csv(&base, Some(&p)));
    ctx.out.json("monopole_perturb.json", &report);
    Ok(passed)
}

pub fn scan_evb(ctx: &mut Ctx, a: &MonopoleScanArgs) -> Result<bool, Failure> {
    let c = config(ctx, &a.grid)?;
    let list = ctx.settings.list(a.evb_list.as_deref(), "evb_list", &[0.1, 0.2, 0.3])?;
    if list.iter().any(|&v| !(v >= 0.0 && v.is_finite())) {
        return Err(Failure::Config("evb_list entries must be non-negative".into()));
    }
    let base = bps_profiles(&c.grid().map_err(compute)?);
    let scan = energy_correction(&base, &list, &c.params, &c.coefficients).map_err(compute)?;
    warn(&scan.warnings);
    let passed = scan.r_squared.is_some_and(|r| r > 0.9999);
    for r in &scan.rows {
        println!("evb={} epsilon={:.6e} dE/E0={:.10e}", r.evb, r.epsilon, r.de_over_e0);
    }
    println!(
        "slope={:.10e} r2={:.12} {}",
        scan.slope.unwrap_or(f64::NAN),
        scan.r_squared.unwrap_or(f64::NAN),
        verdict(passed)
    );
    let report = json!({
        "meta": ctx.meta("monopole scan-evb", grid_meta(&c)),
        "parameters": c,
        "scan": scan,
        "passed": passed,
    });
    ctx.out.text("monopole_scan_evb.csv", energy_scan_csv(&scan));
    ctx.out.json("monopole_scan_evb.json", &report);
    Ok(passed)
}
