//! `key = value` configuration text.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Parses `key = value` lines. Blank lines and text after `#` are ignored;
/// repeated keys are an error.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected `key = value`, got {raw:?}", n + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(Error::Parse(format!("line {}: empty key or value", n + 1)));
        }
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::Parse(format!("line {}: duplicate key {k}", n + 1)));
        }
    }
    Ok(out)
}

pub fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse().map_err(|_| Error::Parse(format!("{key}: not a number: {v:?}")))
}

pub fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.parse().map_err(|_| Error::Parse(format!("{key}: not a non-negative integer: {v:?}")))
}

/// Comma-separated reals; empty entries are rejected.
pub fn parse_f64_list(key: &str, v: &str) -> Result<Vec<f64>> {
    v.split(',').map(|s| parse_f64(key, s.trim())).collect()
}
