//! Flag values merged over a `key = value` config file; flags win.

use std::collections::BTreeMap;
use std::path::Path;

use uinf_core::config::{parse_f64, parse_f64_list, parse_key_values, parse_usize};
use uinf_core::monopole::MonopoleConfig;

use crate::Failure;

const KEYS: &[&str] = &[
    "seed", "out", "lmax", "D", "q", "trials", "dims", "b_list", "evb", "evb_list", "alpha", "alpha_list", "c",
    "lambda", "ordering_b", "cutoffs", "scale",
];

pub struct Settings {
    kv: BTreeMap<String, String>,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let kv = match path {
            None => BTreeMap::new(),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Failure::Config(format!("cannot read config {}: {e}", p.display())))?;
                parse_key_values(&text).map_err(|e| Failure::Config(e.to_string()))?
            }
        };
        if let Some(k) = kv.keys().find(|k| !KEYS.contains(&k.as_str()) && !MonopoleConfig::KEYS.contains(&k.as_str())) {
            return Err(Failure::Config(format!("unknown config key {k}")));
        }
        Ok(Self { kv })
    }

    pub fn raw(&self) -> &BTreeMap<String, String> {
        &self.kv
    }

    fn get<T>(&self, flag: Option<T>, key: &str, parse: impl Fn(&str, &str) -> uinf_core::Result<T>) -> Result<Option<T>, Failure> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.kv.get(key).map(|v| parse(key, v)).transpose().map_err(|e| Failure::Config(e.to_string())),
        }
    }

    pub fn opt_f64(&self, flag: Option<f64>, key: &str) -> Result<Option<f64>, Failure> {
        self.get(flag, key, parse_f64)
    }

    pub fn positive(&self, flag: Option<f64>, key: &str, default: f64) -> Result<f64, Failure> {
        let v = self.opt_f64(flag, key)?.unwrap_or(default);
        require_positive(key, v)
    }

    pub fn count(&self, flag: Option<usize>, key: &str, default: usize, min: usize) -> Result<usize, Failure> {
        let v = self.get(flag, key, parse_usize)?.unwrap_or(default);
        if v < min {
            return Err(Failure::Config(format!("{key} must be at least {min}, got {v}")));
        }
        Ok(v)
    }

    pub fn seed(&self, flag: Option<u64>) -> Result<u64, Failure> {
        let parse = |k: &str, v: &str| v.parse::<u64>().map_err(|_| uinf_core::Error::Parse(format!("{k}: not a seed: {v:?}")));
        Ok(self.get(flag, "seed", parse)?.unwrap_or(0))
    }

    pub fn list(&self, flag: Option<&str>, key: &str, default: &[f64]) -> Result<Vec<f64>, Failure> {
        let v = match flag.map(str::to_string).or_else(|| self.kv.get(key).cloned()) {
            None => default.to_vec(),
            Some(s) => parse_f64_list(key, &s).map_err(|e| Failure::Config(e.to_string()))?,
        };
        if v.is_empty() {
            return Err(Failure::Config(format!("{key} is empty")));
        }
        Ok(v)
    }

    pub fn positive_list(&self, flag: Option<&str>, key: &str, default: &[f64]) -> Result<Vec<f64>, Failure> {
        let v = self.list(flag, key, default)?;
        for &x in &v {
            require_positive(key, x)?;
        }
        Ok(v)
    }

    pub fn decreasing_list(&self, flag: Option<&str>, key: &str, default: &[f64]) -> Result<Vec<f64>, Failure> {
        let v = self.positive_list(flag, key, default)?;
        if v.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Failure::Config(format!("{key} must be strictly decreasing")));
        }
        Ok(v)
    }

    pub fn out_dir(&self, flag: Option<&Path>) -> std::path::PathBuf {
        flag.map(Path::to_path_buf)
            .or_else(|| self.kv.get("out").map(Into::into))
            .unwrap_or_else(|| "uinf-out".into())
    }
}

pub fn require_positive(key: &str, v: f64) -> Result<f64, Failure> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Failure::Config(format!("{key} must be positive and finite, got {v}")));
    }
    Ok(v)
}
