//! Report metadata and all-or-nothing file output.

use std::io::Write;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;
use uinf_core::reduction::{sign_calibration, SignCalibration};
use uinf_core::sphere::{su2_generators, Su2Basis};
use uinf_core::tensor::{suite_delta4, EPS3_CONSTANT, EPS4_CONSTANT, KAPPA};

use crate::Failure;

#[derive(Debug, Serialize)]
pub struct Meta {
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub grid: Value,
    pub sign: f64,
    pub sign_calibration: SignCalibration,
    pub kappa: f64,
    pub kappa_measured: f64,
    pub closure_constant: f64,
    pub su2_basis: Su2Basis,
    pub eps3_constant: f64,
    pub eps4_constant: f64,
}

impl Meta {
    pub fn new(command: &str, seed: u64, grid: Value) -> Self {
        let cal = sign_calibration();
        let su2 = su2_generators();
        // Fixed private stream so the measurement does not depend on the run seed.
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let kappa_measured = suite_delta4(&mut rng, 4, 16).ok().and_then(|r| r.constant).unwrap_or(f64::NAN);
        Self {
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            seed,
            grid,
            sign: cal.sign,
            sign_calibration: cal,
            kappa: KAPPA,
            kappa_measured,
            closure_constant: su2.closure_constant(),
            su2_basis: su2.basis,
            eps3_constant: EPS3_CONSTANT,
            eps4_constant: EPS4_CONSTANT,
        }
    }
}

/// Files are staged in memory and written only when the command finishes,
/// each through a temporary file renamed into place.
pub struct Output {
    dir: PathBuf,
    files: Vec<(String, String)>,
}

impl Output {
    pub fn new(dir: PathBuf) -> Self {
        Self { dir, files: Vec::new() }
    }

    pub fn json(&mut self, name: &str, value: &impl Serialize) {
        let mut s = serde_json::to_string_pretty(value).expect("report serializes");
        s.push('\n');
        self.files.push((name.into(), s));
    }

    pub fn text(&mut self, name: &str, s: String) {
        self.files.push((name.into(), s));
    }

    pub fn commit(self) -> Result<Vec<PathBuf>, Failure> {
        std::fs::create_dir_all(&self.dir)
            .map_err(|e| Failure::Config(format!("cannot create output directory {}: {e}", self.dir.display())))?;
        let mut written = Vec::new();
        for (name, body) in self.files {
            let path = self.dir.join(name);
            write_atomic(&self.dir, &path, body.as_bytes())
                .map_err(|e| Failure::Compute(format!("writing {}: {e}", path.display())))?;
            written.push(path);
        }
        Ok(written)
    }
}

fn write_atomic(dir: &Path, path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
