mod algebra;
mod identities;
mod monopole;
mod reduce;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::output::{Meta, Output};
use crate::settings::Settings;
use crate::{AlgebraCommand, Cli, Command, Failure, MonopoleCommand, ReduceCommand};

pub struct Ctx {
    pub settings: Settings,
    pub seed: u64,
    pub out: Output,
}

impl Ctx {
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub fn meta(&self, command: &str, grid: Value) -> Meta {
        Meta::new(command, self.seed, grid)
    }
}

pub fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Runs the command and writes its files; `Ok(false)` means a check failed.
pub fn run(cli: &Cli) -> Result<bool, Failure> {
    let settings = Settings::load(cli.config.as_deref())?;
    let seed = settings.seed(cli.seed)?;
    let out = Output::new(settings.out_dir(cli.out.as_deref()));
    let mut ctx = Ctx { settings, seed, out };
    let passed = match &cli.command {
        Command::Identities(a) => identities::run(&mut ctx, a)?,
        Command::Reduce(r) => match r {
            ReduceCommand::Scalar(a) => reduce::point(&mut ctx, a, true)?,
            ReduceCommand::Ym(a) => reduce::point(&mut ctx, a, false)?,
            ReduceCommand::TwoDim(a) => reduce::two_dim(&mut ctx, a)?,
            ReduceCommand::ScanB(a) => reduce::scan_b(&mut ctx, a)?,
            ReduceCommand::BornInfeld(a) => reduce::born_infeld(&mut ctx, a)?,
        },
        Command::Monopole(m) => match m {
            MonopoleCommand::Solve(a) => monopole::solve(&mut ctx, a)?,
            MonopoleCommand::Energy(a) => monopole::energy(&mut ctx, a)?,
            MonopoleCommand::Perturb(a) => monopole::perturb(&mut ctx, a)?,
            MonopoleCommand::ScanEvb(a) => monopole::scan_evb(&mut ctx, a)?,
        },
        Command::Algebra(a) => match a {
            AlgebraCommand::StructureConstants { lmax } => algebra::structure_constants(&mut ctx, *lmax)?,
            AlgebraCommand::Su2 => algebra::su2(&mut ctx)?,
            AlgebraCommand::Bracket { f, g } => algebra::bracket(&mut ctx, f, g)?,
        },
    };
    for p in ctx.out.commit()? {
        println!("wrote {}", p.display());
    }
    Ok(passed)
}
