use std::fmt::Write as _;

use serde_json::json;
use uinf_core::random::{random_config, random_field, random_scalar};
use uinf_core::reduction::{
    alpha_ordering, b_scaling_scan, born_infeld_reduction_check, masslessness_check, reduction_grid, scalar_line_values,
    two_dim_exact_check, ym_line_values, Background, BlockMetric, COVARIANT_TOL,
};
use uinf_core::tensor::MAX_DIM;

use super::{verdict, Ctx};
use crate::settings::require_positive;
use crate::{compute, BornInfeldArgs, FieldArgs, Failure, PointArgs, ScanArgs, TwoDimArgs};

struct Field {
    d: usize,
    lmax: usize,
    scale: f64,
}

fn field(ctx: &Ctx, a: &FieldArgs, scale: f64) -> Result<Field, Failure> {
    let d = ctx.settings.count(a.d, "D", 3, 2)?;
    if d + 2 > MAX_DIM {
        return Err(Failure::Config(format!("D must be at most {}, got {d}", MAX_DIM - 2)));
    }
    Ok(Field {
        d,
        lmax: ctx.settings.count(a.lmax, "lmax", 2, 1)?,
        scale: ctx.settings.positive(a.scale, "scale", scale)?,
    })
}

fn sphere_grid(l: usize) -> serde_json::Value {
    let g = reduction_grid(l);
    json!({ "n_theta": g.n_theta(), "n_phi": g.n_phi() })
}

/// `(b, e, q)` from `b` and exactly one of `e`, `q`.
fn coupling(ctx: &Ctx, a: &PointArgs) -> Result<(f64, f64, f64), Failure> {
    let b = ctx.settings.positive(a.b, "b", 0.1)?;
    let (e, q) = if a.e.is_some() || a.q.is_some() {
        (a.e, a.q)
    } else {
        (ctx.settings.opt_f64(None, "e")?, ctx.settings.opt_f64(None, "q")?)
    };
    match (e, q) {
        (Some(_), Some(_)) => Err(Failure::Config("give either e or q, not both".into())),
        (None, Some(q)) => Ok((b, require_positive("q", q)? / (b * b), q)),
        (e, None) => {
            let e = require_positive("e", e.unwrap_or(2.0))?;
            Ok((b, e, e * b * b))
        }
    }
}

pub fn point(ctx: &mut Ctx, a: &PointArgs, scalar: bool) -> Result<bool, Failure> {
    let f = field(ctx, &a.field, 0.5)?;
    let (b, e, q) = coupling(ctx, a)?;
    let trials = ctx.settings.count(a.trials, "trials", 1, 1)?;
    let metric = BlockMetric::minkowski(f.d, b).map_err(compute)?;
    let bg = Background::new(q).map_err(compute)?;
    let mut rng = ctx.rng();
    let mut reports = Vec::new();
    let mut massless = Vec::new();
    let mut passed = true;
    for _ in 0..trials {
        let cfg = random_config(&mut rng, f.d, f.lmax, e, f.scale);
        let r = if scalar {
            let s = random_scalar(&mut rng, f.d, f.lmax, f.scale);
            scalar_line_values(&cfg, &s, &bg, &metric).map_err(compute)?
        } else {
            ym_line_values(&cfg, &bg, &metric).map_err(compute)?
        };
        passed &= r.passes();
        let worst_vanishing = r.residuals.vanishing.iter().map(|v| v.relative).fold(0.0, f64::max);
        println!(
            "{} D={} b={b} e={e} master={:.3e} covariant={:.3e} vanishing={:.3e} {}",
            if scalar { "scalar" } else { "ym" },
            f.d,
            r.residuals.master,
            r.residuals.covariant,
            worst_vanishing,
            verdict(r.passes())
        );
        reports.push(r);
        if scalar {
            let phi = random_field(&mut rng, f.lmax, f.scale);
            let m = masslessness_check(&phi, &bg, &metric).map_err(compute)?;
            passed &= m.passes();
            println!("massless value={:.3e} relative={:.3e} {}", m.value, m.relative, verdict(m.passes()));
            massless.push(m);
        }
    }
    let name = if scalar { "scalar" } else { "ym" };
    let mut report = json!({
        "meta": ctx.meta(&format!("reduce {name}"), sphere_grid(f.lmax)),
        "parameters": { "D": f.d, "lmax": f.lmax, "scale": f.scale, "b": b, "e": e, "q": q, "trials": trials },
        "reports": reports,
        "passed": passed,
    });
    if scalar {
        report["masslessness"] = json!(massless);
    }
    ctx.out.json(&format!("reduce_{name}.json"), &report);
    Ok(passed)
}

pub fn two_dim(ctx: &mut Ctx, a: &TwoDimArgs) -> Result<bool, Failure> {
    let lmax = ctx.settings.count(a.lmax, "lmax", 2, 1)?;
    let scale = ctx.settings.positive(a.scale, "scale", 0.5)?;
    let q = ctx.settings.positive(a.q, "q", 1.0)?;
    let extra = ctx.settings.positive_list(a.b_list.as_deref(), "b_list", &[0.5, 0.1])?;
    let mut rng = ctx.rng();
    let cfg = random_config(&mut rng, 2, lmax, q, scale);
    let bg = Background::new(q).map_err(compute)?;
    let r = two_dim_exact_check(&cfg, &bg, &extra).map_err(compute)?;
    let passed = r.passes(COVARIANT_TOL);
    for row in &r.rows {
        println!(
            "two-dim b={} residual={:.3e} G0={:.3e} G1={:.3e} constant={:.12} double-counted={:.12}",
            row.b, row.residual, row.group_0_relative, row.group_1_relative, row.constant_01, row.constant_double_counted
        );
    }
    println!("two-dim {}", verdict(passed));
    let report = json!({
        "meta": ctx.meta("reduce two-dim", sphere_grid(lmax)),
        "parameters": { "lmax": lmax, "scale": scale, "q": q, "b_list": extra },
        "report": r,
        "tolerance": COVARIANT_TOL,
        "passed": passed,
    });
    ctx.out.json("reduce_two_dim.json", &report);
    Ok(passed)
}

pub fn scan_b(ctx: &mut Ctx, a: &ScanArgs) -> Result<bool, Failure> {
    let f = field(ctx, &a.field, 0.5)?;
    let e = ctx.settings.positive(a.e, "e", 2.0)?;
    let b_list = ctx.settings.decreasing_list(a.b_list.as_deref(), "b_list", &[0.4, 0.2, 0.1, 0.05])?;
    if b_list.len() < 2 {
        return Err(Failure::Config("b_list needs at least two radii for a fit".into()));
    }
    let mut rng = ctx.rng();
    let cfg = random_config(&mut rng, f.d, f.lmax, e, f.scale);
    let s = random_scalar(&mut rng, f.d, f.lmax, f.scale);
    let g: Vec<f64> = BlockMetric::minkowski(f.d, 1.0).map_err(compute)?.g_spacetime().to_vec();
    let scalar = b_scaling_scan(&cfg, Some(&s), e, &g, &b_list).map_err(compute)?;
    let ym = b_scaling_scan(&cfg, None, e, &g, &b_list).map_err(compute)?;
    let passed = scalar.passes() && ym.passes();
    for (name, t) in [("scalar", &scalar), ("ym", &ym)] {
        println!(
            "scan-b {name}: exponent={:.6} r2={:.8} {}",
            t.fit_exponent.unwrap_or(f64::NAN),
            t.fit_r_squared.unwrap_or(f64::NAN),
            verdict(t.passes())
        );
    }
    let report = json!({
        "meta": ctx.meta("reduce scan-b", sphere_grid(f.lmax)),
        "parameters": { "D": f.d, "lmax": f.lmax, "scale": f.scale, "e": e, "b_list": b_list },
        "scalar": scalar,
        "ym": ym,
        "passed": passed,
    });
    ctx.out.text("reduce_scan_b_scalar.csv", scalar.to_csv());
    ctx.out.text("reduce_scan_b_ym.csv", ym.to_csv());
    ctx.out.json("reduce_scan_b.json", &report);
    Ok(passed)
}

pub fn born_infeld(ctx: &mut Ctx, a: &BornInfeldArgs) -> Result<bool, Failure> {
    let f = field(ctx, &a.field, 0.2)?;
    let s = &ctx.settings;
    let e = s.positive(a.e, "e", 1.0)?;
    let b_list = s.decreasing_list(a.b_list.as_deref(), "b_list", &[0.4, 0.2, 0.1, 0.05])?;
    let alpha = s.positive(a.alpha, "alpha", 0.5)?;
    let c = s.positive(a.c, "c", 1.0)?;
    let alpha_list = s.decreasing_list(a.alpha_list.as_deref(), "alpha_list", &[0.03, 0.01, 0.003, 0.001])?;
    let ob = s.positive(a.ordering_b, "ordering_b", 0.3)?;
    let lambda = s.positive(a.lambda, "lambda", 1.0)?;
    let q = e * ob * ob;
    if alpha_list.iter().any(|&x| x >= q) {
        eprintln!("warning: α values at or above q = e b² = {q} lie outside the ordering regime α ≪ q");
    }
    let mut rng = ctx.rng();
    let cfg = random_config(&mut rng, f.d, f.lmax, e, f.scale);
    let g: Vec<f64> = BlockMetric::minkowski(f.d, 1.0).map_err(compute)?.g_spacetime().to_vec();
    let table = born_infeld_reduction_check(&cfg, e, &g, alpha, c, &b_list).map_err(compute)?;
    let ordering = alpha_ordering(&cfg, e, &g, ob, c, lambda, &alpha_list).map_err(compute)?;
    let passed = table.converging && ordering.suppressed;
    let mut csv = String::from("b,q,full,reduced,ratio,drift\n");
    for r in &table.rows {
        let drift = r.drift.unwrap_or(f64::NAN);
        writeln!(csv, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", r.b, r.q, r.full, r.reduced, r.ratio, drift).unwrap();
        println!("born-infeld b={} ratio={:.12} drift={:.3e}", r.b, r.ratio, drift);
    }
    let mut ocsv = String::from("alpha,share_full,share_e,share_0,suppression\n");
    for r in &ordering.rows {
        writeln!(ocsv, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", r.alpha, r.share_full, r.share_e, r.share_0, r.suppression)
            .unwrap();
        println!("alpha-ordering alpha={} suppression={:.6e}", r.alpha, r.suppression);
    }
    println!(
        "born-infeld converging={} suppressed={} {}",
        table.converging,
        ordering.suppressed,
        verdict(passed)
    );
    let report = json!({
        "meta": ctx.meta("reduce born-infeld", sphere_grid(f.lmax)),
        "parameters": {
            "D": f.d, "lmax": f.lmax, "scale": f.scale, "e": e, "b_list": b_list, "alpha": alpha, "c": c,
            "alpha_list": alpha_list, "ordering_b": ob, "lambda": lambda,
        },
        "scan": table,
        "ordering": ordering,
        "passed": passed,
    });
    ctx.out.text("reduce_born_infeld.csv", csv);
    ctx.out.text("reduce_alpha_ordering.csv", ocsv);
    ctx.out.json("reduce_born_infeld.json", &report);
    Ok(passed)
}
