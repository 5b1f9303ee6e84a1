use std::path::Path;

use serde_json::json;
use uinf_core::sphere::{bracket as poisson_bracket, su2_generators, HarmonicField, SphereGrid, StructureConstants, SU2_CLOSURE_TOL};

use super::{verdict, Ctx};
use crate::{compute, Failure};

fn sphere_grid(l: usize) -> serde_json::Value {
    let g = SphereGrid::for_degree(2 * l.max(1));
    json!({ "n_theta": g.n_theta(), "n_phi": g.n_phi() })
}

pub fn structure_constants(ctx: &mut Ctx, lmax: Option<usize>) -> Result<bool, Failure> {
    let l = ctx.settings.count(lmax, "lmax", 2, 1)?;
    let sc = StructureConstants::compute(l).map_err(compute)?;
    let csv = sc.to_csv();
    let rows = csv.lines().count() - 1;
    let l0_rows = csv.lines().skip(1).filter(|r| {
        let f: Vec<&str> = r.split(',').collect();
        f[0] == "0" || f[2] == "0" || f[4] == "0"
    });
    let l0_rows = l0_rows.count();
    let passed = l0_rows == 0;
    println!("structure constants l_max={l}: {rows} nonzero entries, {l0_rows} with l = 0 {}", verdict(passed));
    let report = json!({
        "meta": ctx.meta("algebra structure-constants", sphere_grid(l)),
        "parameters": { "lmax": l },
        "rows": rows,
        "l0_rows": l0_rows,
        "passed": passed,
    });
    ctx.out.text("algebra_structure_constants.csv", csv);
    ctx.out.json("algebra_structure_constants.json", &report);
    Ok(passed)
}

pub fn su2(ctx: &mut Ctx) -> Result<bool, Failure> {
    let s = su2_generators();
    let passed = s.closure.holds(SU2_CLOSURE_TOL);
    println!(
        "su2 basis={:?} c={:.16e} residual={:.3e} (printed basis residual {:.3e}) {}",
        s.basis,
        s.closure_constant(),
        s.closure.residual,
        s.printed_closure.residual,
        verdict(passed)
    );
    let report = json!({
        "meta": ctx.meta("algebra su2", sphere_grid(2)),
        "basis": s.basis,
        "closure_constant": s.closure_constant(),
        "closure": s.closure,
        "printed_closure": s.printed_closure,
        "generators": s.t.iter().map(HarmonicField::to_json_value).collect::<Vec<_>>(),
        "tolerance": SU2_CLOSURE_TOL,
        "passed": passed,
    });
    ctx.out.json("algebra_su2.json", &report);
    Ok(passed)
}

fn read_field(p: &Path) -> Result<HarmonicField, Failure> {
    let text = std::fs::read_to_string(p).map_err(|e| Failure::Config(format!("cannot read {}: {e}", p.display())))?;
    HarmonicField::from_json(&text).map_err(|e| Failure::Config(format!("{}: {e}", p.display())))
}

pub fn bracket(ctx: &mut Ctx, f: &Path, g: &Path) -> Result<bool, Failure> {
    let (f, g) = (read_field(f)?, read_field(g)?);
    let b = poisson_bracket(&f, &g);
    println!("bracket l_max={} with {} nonzero coefficients", b.l_max(), b.nonzero().count());
    let report = json!({
        "meta": ctx.meta("algebra bracket", sphere_grid(b.l_max())),
        "f_l_max": f.l_max(),
        "g_l_max": g.l_max(),
        "field": b.to_json_value(),
    });
    ctx.out.json("algebra_bracket.json", &report);
    ctx.out.text("algebra_bracket_field.json", b.to_json() + "\n");
    Ok(true)
}
