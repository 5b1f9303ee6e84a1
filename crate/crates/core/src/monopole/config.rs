use std::collections::BTreeMap;

use serde::Serialize;

use super::density::SecondLineCoefficients;
use super::energy::PrefactorParams;
use super::{RadialGrid, DEFAULT_GRADING, DEFAULT_XI_MIN};
use crate::config::{parse_f64, parse_usize};
use crate::error::{Error, Result};

/// Monopole run parameters; `key = value` names match the field names, with
/// `coef_*` and `xi_power` overriding the residual-line coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonopoleConfig {
    pub params: PrefactorParams,
    pub xi_min: f64,
    pub xi_max: f64,
    pub n_points: usize,
    pub grading: f64,
    pub coefficients: SecondLineCoefficients,
}

impl Default for MonopoleConfig {
    fn default() -> Self {
        Self {
            params: PrefactorParams::default(),
            xi_min: DEFAULT_XI_MIN,
            xi_max: 25.0,
            n_points: 4000,
            grading: DEFAULT_GRADING,
            coefficients: SecondLineCoefficients::default(),
        }
    }
}

impl MonopoleConfig {
    pub const KEYS: [&'static str; 14] = [
        "v",
        "beta",
        "e",
        "b",
        "xi_min",
        "xi_max",
        "n_points",
        "grading",
        "coef_h2_dk2",
        "coef_dh2_1mk2",
        "coef_h2_1mk2",
        "coef_dk2_1mk2",
        "coef_xi_1mk4",
        "xi_power",
    ];

    /// Applies the recognised keys of `kv`; other keys are left to the caller.
    pub fn apply(&mut self, kv: &BTreeMap<String, String>) -> Result<()> {
        for (k, v) in kv {
            let c = &mut self.coefficients;
            let slot = match k.as_str() {
                "n_points" => {
                    self.n_points = parse_usize(k, v)?;
                    continue;
                }
                "v" => &mut self.params.v,
                "beta" => &mut self.params.beta,
                "e" => &mut self.params.e,
                "b" => &mut self.params.b,
                "xi_min" => &mut self.xi_min,
                "xi_max" => &mut self.xi_max,
                "grading" => &mut self.grading,
                "coef_h2_dk2" => &mut c.h2_dk2,
                "coef_dh2_1mk2" => &mut c.dh2_1mk2,
                "coef_h2_1mk2" => &mut c.h2_1mk2,
                "coef_dk2_1mk2" => &mut c.dk2_1mk2,
                "coef_xi_1mk4" => &mut c.xi_1mk4,
                "xi_power" => &mut c.xi_power,
                _ => continue,
            };
            *slot = parse_f64(k, v)?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !self.coefficients.all_nonnegative() {
            return Err(Error::InvalidArgument("residual-line coefficients must be non-negative".into()));
        }
        self.grid().map(|_| ())
    }

    pub fn grid(&self) -> Result<RadialGrid> {
        RadialGrid::graded(self.xi_min, self.xi_max, self.n_points, self.grading)
    }
}
