use std::fmt::Write as _;

use serde::Serialize;

use super::{
    calibrated_sign, rel_diff, reduction_grid, scalar_report_with_sign, ym_report_with_sign, Background,
    BlockMetric, Model, Sampled, COVARIANT_GROUP, MIN_SCALING_EXPONENT,
};
use crate::error::{Error, Result};
use crate::gauge::{AdjointScalar, GaugeConfig};
use crate::stats::power_law_fit;
use crate::tensor;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub b: f64,
    pub q: f64,
    pub covariant_group: f64,
    pub residual_group_1: f64,
    pub residual_group_0: f64,
    /// `(|G1| + |G0|) / |G2|`.
    pub ratio: f64,
    pub covariant_residual: f64,
}

/// Line groups along a sequence of radii at fixed `e = q / b²`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanTable {
    pub model: Model,
    pub e: f64,
    pub rows: Vec<ScanRow>,
    /// Exponent `p` of `ratio ∝ b^p` from a log-log least-squares fit.
    pub fit_exponent: Option<f64>,
    pub fit_r_squared: Option<f64>,
}

impl ScanTable {
    pub fn passes(&self) -> bool {
        self.fit_exponent.is_some_and(|p| p >= MIN_SCALING_EXPONENT)
    }

    /// CSV `b,q,covariant_group,residual_group_1,residual_group_0,ratio,fit_exponent`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("b,q,covariant_group,residual_group_1,residual_group_0,ratio,fit_exponent\n");
        let p = self.fit_exponent.unwrap_or(f64::NAN);
        for r in &self.rows {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                r.b, r.q, r.covariant_group, r.residual_group_1, r.residual_group_0, r.ratio, p
            )
            .unwrap();
        }
        out
    }
}

/// Evaluates the scalar model when `scalar` is given, Yang-Mills otherwise, at
/// every `b` in `b_list` (strictly decreasing) with `q = e b²`.
pub fn b_scaling_scan(
    cfg: &GaugeConfig,
    scalar: Option<&AdjointScalar>,
    e: f64,
    g_spacetime: &[f64],
    b_list: &[f64],
) -> Result<ScanTable> {
    if b_list.is_empty() {
        return Err(Error::InvalidArgument("b_list is empty".into()));
    }
    if b_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidArgument("b_list must be strictly decreasing".into()));
    }
    let sign = calibrated_sign();
    let l = cfg.l_max().max(scalar.map_or(0, |s| s.l_max()));
    let mut rows = Vec::with_capacity(b_list.len());
    for &b in b_list {
        let metric = BlockMetric::new(g_spacetime.to_vec(), b)?;
        let bg = Background::for_coupling(e, b)?;
        let r = match scalar {
            Some(s) => scalar_report_with_sign(cfg, s, &bg, &metric, reduction_grid(l), sign)?,
            None => ym_report_with_sign(cfg, &bg, &metric, reduction_grid(l), sign)?,
        };
        let g2 = r.groups[COVARIANT_GROUP];
        let (g1, g0) = r.residual_groups();
        rows.push(ScanRow {
            b,
            q: bg.q(),
            covariant_group: g2,
            residual_group_1: g1,
            residual_group_0: g0,
            ratio: (g1.abs() + g0.abs()) / g2.abs(),
            covariant_residual: r.residuals.covariant,
        });
    }
    let bs: Vec<f64> = rows.iter().map(|r| r.b).collect();
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let fit = power_law_fit(&bs, &ratios);
    Ok(ScanTable {
        model: if scalar.is_some() { Model::Scalar } else { Model::YangMills },
        e,
        rows,
        fit_exponent: fit.map(|f| f.slope),
        fit_r_squared: fit.map(|f| f.r_squared),
    })
}

/// `(ε F F)² / |g|` over `(1/q²) ∫ F̃_01² dΩ`.
pub const TWO_DIM_CONSTANT: f64 = 64.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoDimRow {
    pub b: f64,
    pub q: f64,
    pub e: f64,
    /// `∫ (ε^{ABCD} F_AB F_CD)² / |g| dΩ` of the assembled 4-dimensional fields.
    pub full: f64,
    /// `(1/q²) ∫ F̃_01² dΩ`.
    pub reference_01: f64,
    /// `(1/q²) Σ_μν g^{μμ} g^{νν} ∫ F̃_μν² dΩ` (index pairs counted twice).
    pub reference_double_counted: f64,
    pub constant_01: f64,
    pub constant_double_counted: f64,
    /// `|full − 64 reference_01| / max(|full|, |64 reference_01|)`.
    pub residual: f64,
    /// Yang-Mills groups with zero and one inverse extra factor, relative to their terms.
    pub group_0_relative: f64,
    pub group_1_relative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoDimReport {
    pub sign: f64,
    pub rows: Vec<TwoDimRow>,
}

impl TwoDimReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.rows
            .iter()
            .all(|r| r.residual < tol && r.group_0_relative < tol && r.group_1_relative < tol)
    }
}

/// Two spacetime dimensions: the squared ε contraction of the assembled fields
/// against the reduced field strength. The first row is `b = 1` with the given
/// `bg`; further rows keep `e = q` and set `q = e b²`.
pub fn two_dim_exact_check(cfg: &GaugeConfig, bg: &Background, extra_b: &[f64]) -> Result<TwoDimReport> {
    if cfg.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: cfg.dim() });
    }
    let sign = calibrated_sign();
    let e = bg.q();
    let mut rows = Vec::new();
    for b in std::iter::once(1.0).chain(extra_b.iter().copied()) {
        let metric = BlockMetric::minkowski(2, b)?;
        let bg = Background::for_coupling(e, b)?;
        let grid = reduction_grid(cfg.l_max());
        let sampled = Sampled::new(cfg, None, grid.clone())?;
        let weights = grid.weights();
        let mut full = 0.0;
        for (k, &w) in weights.iter().enumerate() {
            let (f, _, g) = sampled.point(k, &bg, &metric);
            full += w * tensor::eps_square_ym_4d(&f, &g)?;
        }
        let q = bg.q();
        let reduced = cfg.with_coupling(sign * bg.coupling(b));
        let f01 = reduced.field_strength(0, 1)?;
        let reference_01 = f01.integral_of_product(&f01).re / (q * q);
        let reference_dc = reduced.action_ym(metric.g_spacetime())? / (q * q);
        let ym = ym_report_with_sign(cfg, &bg, &metric, grid, sign)?;
        let rel = |k: usize| {
            let m = ym.group_magnitudes[k];
            if m == 0.0 {
                0.0
            } else {
                ym.groups[k].abs() / m
            }
        };
        rows.push(TwoDimRow {
            b,
            q,
            e: bg.coupling(b),
            full,
            reference_01,
            reference_double_counted: reference_dc,
            constant_01: full / reference_01,
            constant_double_counted: full / reference_dc,
            residual: rel_diff(full, TWO_DIM_CONSTANT * reference_01),
            group_0_relative: rel(0),
            group_1_relative: rel(1),
        });
    }
    Ok(TwoDimReport { sign, rows })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::random::{random_config, random_scalar};

    #[test]
    fn two_dim_exact_and_constants() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cfg = random_config(&mut rng, 2, 2, 1.0, 0.7);
        let r = two_dim_exact_check(&cfg, &Background::new(0.8).unwrap(), &[0.5, 0.1]).unwrap();
        assert!(r.passes(1e-9), "{r:?}");
        for row in &r.rows {
            assert!((row.constant_double_counted + 32.0).abs() < 1e-8);
        }
        let zero = GaugeConfig::zero(2, 1, 1.0);
        let r = two_dim_exact_check(&zero, &Background::new(1.0).unwrap(), &[]).unwrap();
        assert_eq!(r.rows[0].full, 0.0);
        assert!(r.passes(1e-9));
        assert!(two_dim_exact_check(&GaugeConfig::zero(3, 1, 1.0), &Background::new(1.0).unwrap(), &[]).is_err());
    }

    #[test]
    fn scan_exponent_at_least_two() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let cfg = random_config(&mut rng, 3, 2, 1.0, 0.5);
        let s = random_scalar(&mut rng, 3, 2, 0.5);
        let g = [-1.0, 1.0, 1.0];
        let b_list = [0.4, 0.2, 0.1, 0.05];
        let t = b_scaling_scan(&cfg, Some(&s), 2.0, &g, &b_list).unwrap();
        assert!(t.passes(), "{t:?}");
        let t = b_scaling_scan(&cfg, None, 2.0, &g, &b_list).unwrap();
        assert!(t.passes(), "{t:?}");
        assert_eq!(t.to_csv().lines().count(), 5);
        assert!(b_scaling_scan(&cfg, None, 2.0, &g, &[]).is_err());
        assert!(b_scaling_scan(&cfg, None, 2.0, &g, &[0.1, 0.2]).is_err());
    }
}
