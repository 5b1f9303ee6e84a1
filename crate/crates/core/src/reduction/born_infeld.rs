//! Born-Infeld reduction. As `b → 0` at fixed `e = q/b²` the full density
//! integrated over `dθ dφ` approaches
//! `(C/α²) ∫ √(−(α²/e²) det(g + αF̃)) dΩ`.

use serde::Serialize;

use super::{calibrated_sign, Background, BlockMetric, Sampled};
use crate::error::{Error, Result};
use crate::gauge::GaugeConfig;
use crate::sphere::SphereGrid;
use crate::tensor::{born_infeld_density, shifted_determinant, FlatMetric, FlatTensor2};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BornInfeldRow {
    pub b: f64,
    pub q: f64,
    /// `∫ density dθ dφ` of the full `(D+2)`-dimensional density.
    pub full: f64,
    /// `(C/α²) ∫ √(−(α²/e²) det(g + αF̃)) dΩ`.
    pub reduced: f64,
    pub ratio: f64,
    /// `|ratio − previous ratio|`; absent on the first row.
    pub drift: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BornInfeldTable {
    pub e: f64,
    pub alpha: f64,
    pub c: f64,
    pub sign: f64,
    pub rows: Vec<BornInfeldRow>,
    /// Drifts strictly decrease along the scan.
    pub converging: bool,
}

fn grid_for(cfg: &GaugeConfig) -> SphereGrid {
    SphereGrid::for_degree(4 * cfg.l_max().max(1) + 8)
}

/// `(C/α²) ∫ √(−(α²/e²) det(g_st + αF̃)) dΩ` with coupling `sign · e` in `F̃`.
fn reduced_integral(cfg: &GaugeConfig, e: f64, coupling: f64, g_st: &[f64], alpha: f64, c: f64, grid: &SphereGrid) -> Result<f64> {
    let d = cfg.dim();
    let reduced = cfg.with_coupling(coupling);
    let mut ft = Vec::with_capacity(d * d);
    for mu in 0..d {
        for nu in 0..d {
            ft.push(if mu == nu { None } else { Some(reduced.field_strength(mu, nu)?) });
        }
    }
    let samples: Vec<Option<Vec<f64>>> = ft
        .iter()
        .map(|f| f.as_ref().map(|f| f.synthesize(grid).map(|v| v.iter().map(|z| z.re).collect())).transpose())
        .collect::<Result<_>>()?;
    let g = FlatMetric::new(g_st.to_vec())?;
    let weights = grid.weights();
    let mut total = 0.0;
    for (k, &w) in weights.iter().enumerate() {
        let mut f = FlatTensor2::zeros(d)?;
        for mu in 0..d {
            for nu in 0..d {
                if let Some(s) = &samples[mu * d + nu] {
                    f.set(mu, nu, s[k]);
                }
            }
        }
        let det = shifted_determinant(&f, &g, alpha)?;
        let arg = -(alpha * alpha) / (e * e) * det;
        if arg < 0.0 {
            return Err(Error::NotLorentzian(format!("reduced determinant argument {arg:e} at node {k}")));
        }
        total += w * c / (alpha * alpha) * arg.sqrt();
    }
    Ok(total)
}

/// `∫ density dθ dφ = ∫ density / sin θ dΩ` for the assembled fields.
fn full_integral(cfg: &GaugeConfig, bg: &Background, metric: &BlockMetric, alpha: f64, c: f64, grid: &SphereGrid) -> Result<f64> {
    let sampled = Sampled::new(cfg, None, grid.clone())?;
    let weights = grid.weights();
    let mut total = 0.0;
    for (k, &w) in weights.iter().enumerate() {
        let (f, _, g) = sampled.point(k, bg, metric);
        let sin = grid.sin_theta()[k / grid.n_phi()];
        total += w * born_infeld_density(&f, &g, alpha, c)? / sin;
    }
    Ok(total)
}

/// Full against reduced Born-Infeld integrals along a decreasing `b_list` at
/// fixed `e`.
pub fn born_infeld_reduction_check(
    cfg: &GaugeConfig,
    e: f64,
    g_spacetime: &[f64],
    alpha: f64,
    c: f64,
    b_list: &[f64],
) -> Result<BornInfeldTable> {
    if b_list.is_empty() {
        return Err(Error::InvalidArgument("b_list is empty".into()));
    }
    if b_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidArgument("b_list must be strictly decreasing".into()));
    }
    if alpha == 0.0 || e == 0.0 {
        return Err(Error::InvalidArgument("alpha and e must be nonzero".into()));
    }
    let sign = calibrated_sign();
    let grid = grid_for(cfg);
    let reduced = reduced_integral(cfg, e, sign * e, g_spacetime, alpha, c, &grid)?;
    let mut rows: Vec<BornInfeldRow> = Vec::with_capacity(b_list.len());
    for &b in b_list {
        let metric = BlockMetric::new(g_spacetime.to_vec(), b)?;
        let bg = Background::for_coupling(e, b)?;
        let full = full_integral(cfg, &bg, &metric, alpha, c, &grid)?;
        let ratio = full / reduced;
        let drift = rows.last().map(|p| (ratio - p.ratio).abs());
        rows.push(BornInfeldRow { b, q: bg.q(), full, reduced, ratio, drift });
    }
    let drifts: Vec<f64> = rows.iter().filter_map(|r| r.drift).collect();
    let converging = drifts.windows(2).all(|w| w[1] < w[0]);
    Ok(BornInfeldTable { e, alpha, c, sign, rows, converging })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaOrderingRow {
    pub alpha: f64,
    /// Odd-in-`A` share of the full integral at fixed `b`.
    pub share_full: f64,
    /// Same for the reduced form with coupling `e`.
    pub share_e: f64,
    /// Same for the reduced form with coupling 0.
    pub share_0: f64,
    /// `share_full / share_e`.
    pub suppression: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaOrderingTable {
    pub b: f64,
    pub e: f64,
    pub lambda: f64,
    pub rows: Vec<AlphaOrderingRow>,
    /// Suppression decreases along the (decreasing) `α` list and `share_0` vanishes.
    pub suppressed: bool,
}

/// Share of an integral `I(λ)` of the configuration scaled by `λ` that comes
/// from terms odd in `λ`: `|I(λ) − I(−λ)| / |I(λ) + I(−λ) − 2 I(0)|`. Only the
/// bracket in `F̃` produces odd terms, so this measures its contribution.
fn odd_share(i: impl Fn(f64) -> Result<f64>, lambda: f64) -> Result<f64> {
    let (p, m, z) = (i(lambda)?, i(-lambda)?, i(0.0)?);
    let even = (p + m - 2.0 * z).abs();
    Ok(if even == 0.0 { 0.0 } else { (p - m).abs() / even })
}

/// Limit-ordering experiment at fixed `b`: as `α` shrinks the full density
/// loses the bracket contribution that the reduced form with coupling `e`
/// keeps.
pub fn alpha_ordering(
    cfg: &GaugeConfig,
    e: f64,
    g_spacetime: &[f64],
    b: f64,
    c: f64,
    lambda: f64,
    alpha_list: &[f64],
) -> Result<AlphaOrderingTable> {
    if alpha_list.is_empty() {
        return Err(Error::InvalidArgument("alpha list is empty".into()));
    }
    if alpha_list.windows(2).any(|w| !(w[1] < w[0])) || alpha_list.iter().any(|&a| !(a > 0.0)) {
        return Err(Error::InvalidArgument("alpha list must be positive and strictly decreasing".into()));
    }
    let sign = calibrated_sign();
    let grid = grid_for(cfg);
    let metric = BlockMetric::new(g_spacetime.to_vec(), b)?;
    let bg = Background::for_coupling(e, b)?;
    let mut rows = Vec::with_capacity(alpha_list.len());
    for &alpha in alpha_list {
        let share_full = odd_share(|l| full_integral(&cfg.scaled(l), &bg, &metric, alpha, c, &grid), lambda)?;
        let share_e = odd_share(|l| reduced_integral(&cfg.scaled(l), e, sign * e, g_spacetime, alpha, c, &grid), lambda)?;
        let share_0 = odd_share(|l| reduced_integral(&cfg.scaled(l), e, 0.0, g_spacetime, alpha, c, &grid), lambda)?;
        rows.push(AlphaOrderingRow {
            alpha,
            share_full,
            share_e,
            share_0,
            suppression: share_full / share_e,
        });
    }
    let suppressed = rows.windows(2).all(|w| w[1].suppression < w[0].suppression)
        && rows.iter().all(|r| r.share_0 < 1e-10);
    Ok(AlphaOrderingTable { b, e, lambda, rows, suppressed })
}
