use serde_json::json;
use uinf_core::tensor::{suite_delta3, suite_delta4, suite_eps3, suite_eps4, IdentityReport, MAX_DIM};

use super::{verdict, Ctx};
use crate::{compute, Failure, IdentitiesArgs};

pub const IDENTITY_TOL: f64 = 1e-10;

fn holds(r: &IdentityReport) -> bool {
    let pinned_ok = match (r.constant, r.pinned) {
        (Some(c), Some(p)) => (c - p).abs() <= IDENTITY_TOL * p.abs(),
        _ => true,
    };
    r.passes(IDENTITY_TOL) && pinned_ok
}

pub fn run(ctx: &mut Ctx, a: &IdentitiesArgs) -> Result<bool, Failure> {
    let dims: Vec<usize> = ctx
        .settings
        .list(a.dims.as_deref(), "dims", &[3.0, 4.0, 5.0, 6.0, 7.0, 8.0])?
        .into_iter()
        .map(|d| {
            if d.fract() == 0.0 && (3.0..=MAX_DIM as f64).contains(&d) {
                Ok(d as usize)
            } else {
                Err(Failure::Config(format!("dims entries must be integers in 3..={MAX_DIM}, got {d}")))
            }
        })
        .collect::<Result<_, _>>()?;
    let trials = ctx.settings.count(a.trials, "trials", 1000, 1)?;
    let mut rng = ctx.rng();
    let mut reports = Vec::new();
    for &n in &dims {
        reports.push(suite_delta3(&mut rng, n, trials).map_err(compute)?);
        if n >= 4 {
            reports.push(suite_delta4(&mut rng, n, trials).map_err(compute)?);
        }
    }
    reports.push(suite_eps3(&mut rng, trials).map_err(compute)?);
    reports.push(suite_eps4(&mut rng, trials).map_err(compute)?);
    let mut passed = true;
    let mut rows = Vec::new();
    for r in &reports {
        let ok = holds(r);
        passed &= ok;
        let constant = r.constant.map_or(String::new(), |c| format!(" constant={c:.12}"));
        println!("{} n={} trials={} max_rel_err={:.3e}{constant} {}", r.identity, r.dims, r.trials, r.max_rel_err, verdict(ok));
        rows.push(json!({ "report": r, "passed": ok }));
    }
    let report = json!({
        "meta": ctx.meta("identities", json!({ "dims": dims })),
        "parameters": { "dims": dims, "trials": trials },
        "tolerance": IDENTITY_TOL,
        "reports": rows,
        "passed": passed,
    });
    ctx.out.json("identities.json", &report);
    Ok(passed)
}
