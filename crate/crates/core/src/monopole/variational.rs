//! Gradient check of the discretized energy functional.

use rand::Rng;
use serde::Serialize;

use super::density::{full_density, gradient, SecondLineCoefficients};
use super::MonopoleProfile;
use crate::error::{Error, Result};

/// Relative agreement required between the two Gateaux derivatives.
pub const VARIATIONAL_TOL: f64 = 1e-6;
/// Both derivatives must fall below this at a stationary point.
pub const STATIONARITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariationalReport {
    /// `∫ (δF/δK δK + δF/δH δH) dξ` with the Euler-Lagrange expressions.
    pub analytic: f64,
    /// Five-point difference of the discretized functional along the direction.
    pub finite_difference: f64,
    /// `|analytic − finite_difference| / max(|analytic|, |finite_difference|)`, 0 when both vanish.
    pub rel_diff: f64,
}

impl VariationalReport {
    pub fn passes(&self) -> bool {
        self.rel_diff < VARIATIONAL_TOL
    }

    pub fn stationary(&self) -> bool {
        self.analytic.abs() < STATIONARITY_TOL && self.finite_difference.abs() < STATIONARITY_TOL
    }
}

fn functional(p: &MonopoleProfile, c: &SecondLineCoefficients, epsilon: f64) -> f64 {
    let f: Vec<f64> = p.grid.xi().iter().zip(p.jets()).map(|(&x, y)| full_density(x, y, c, epsilon)).collect();
    p.grid.integrate(&f)
}

fn shifted(p: &MonopoleProfile, dk: &[f64], dh: &[f64], t: f64) -> MonopoleProfile {
    MonopoleProfile {
        grid: p.grid.clone(),
        k: p.k.iter().zip(dk).map(|(a, b)| a + t * b).collect(),
        h: p.h.iter().zip(dh).map(|(a, b)| a + t * b).collect(),
    }
}

/// Gateaux derivative of `∫ (f₁ + ε f₂) dξ` along `(δK, δH)`, which must
/// vanish at both ends of the grid.
pub fn variational_check(
    p: &MonopoleProfile,
    dk: &[f64],
    dh: &[f64],
    c: &SecondLineCoefficients,
    epsilon: f64,
) -> Result<VariationalReport> {
    let n = p.grid.len();
    if dk.len() != n || dh.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: dk.len().min(dh.len()) });
    }
    if [dk[0], dh[0], dk[n - 1], dh[n - 1]].iter().any(|&v| v != 0.0) {
        return Err(Error::InvalidArgument("direction must vanish at both ends".into()));
    }
    let xi = p.grid.xi();
    let grads: Vec<[f64; 4]> =
        xi.iter().zip(p.jets()).map(|(&x, y)| gradient(|z| full_density(x, z, c, epsilon), y)).collect();
    let pk: Vec<f64> = grads.iter().map(|g| g[1]).collect();
    let ph: Vec<f64> = grads.iter().map(|g| g[3]).collect();
    let dpk = p.grid.derivative(&pk);
    let dph = p.grid.derivative(&ph);
    let integrand: Vec<f64> =
        (0..n).map(|i| (grads[i][0] - dpk[i]) * dk[i] + (grads[i][2] - dph[i]) * dh[i]).collect();
    let analytic = p.grid.integrate(&integrand);

    let size = dk.iter().chain(dh).fold(0.0f64, |m, v| m.max(v.abs()));
    if size == 0.0 {
        return Ok(VariationalReport { analytic, finite_difference: 0.0, rel_diff: analytic.abs() });
    }
    // The functional is quartic in t, so this stencil has no truncation error.
    let t = 0.05 / size;
    let f = |s: f64| functional(&shifted(p, dk, dh, s), c, epsilon);
    let finite_difference = (8.0 * (f(t) - f(-t)) - (f(2.0 * t) - f(-2.0 * t))) / (12.0 * t);
    let m = analytic.abs().max(finite_difference.abs());
    let rel_diff = if m == 0.0 { 0.0 } else { (analytic - finite_difference).abs() / m };
    Ok(VariationalReport { analytic, finite_difference, rel_diff })
}

/// Smooth bump `amp · exp(1 − 1/(1 − s²))`, `s = (ξ − center)/half_width`,
/// zero outside `|s| < 1`.
pub fn bump_direction(xi: &[f64], center: f64, half_width: f64, amp: f64) -> Vec<f64> {
    xi.iter()
        .map(|&x| {
            let s = (x - center) / half_width;
            if s.abs() < 1.0 {
                amp * (1.0 - 1.0 / (1.0 - s * s)).exp()
            } else {
                0.0
            }
        })
        .collect()
}

/// `base + a (ξ/c)² exp(−((ξ − c)/w)²)` in `K` and in `H` with independent
/// parameters; keeps the `ξ²` approach at the origin and the values at `Ξ`
/// when `c + 6w < Ξ`.
pub fn perturbed_profile(base: &MonopoleProfile, k: (f64, f64, f64), h: (f64, f64, f64)) -> MonopoleProfile {
    let add = |v: &[f64], (a, c, w): (f64, f64, f64)| {
        base.grid.xi().iter().zip(v).map(|(&x, &y)| y + a * (x / c).powi(2) * (-((x - c) / w).powi(2)).exp()).collect()
    };
    MonopoleProfile { grid: base.grid.clone(), k: add(&base.k, k), h: add(&base.h, h) }
}

/// Random bump parameters `(a, c, w)` with `a ∈ [−½, ½]`, `c ∈ [½, Ξ/2]`,
/// `w ∈ [0.3, 2]`.
pub fn random_bump<R: Rng>(rng: &mut R, cutoff: f64) -> (f64, f64, f64) {
    (rng.gen_range(-0.5..0.5), rng.gen_range(0.5..0.5 * cutoff), rng.gen_range(0.3..2.0))
}

/// Random compactly supported direction inside `(ξ₀, Ξ)`.
pub fn random_direction<R: Rng>(rng: &mut R, xi: &[f64]) -> Vec<f64> {
    let (lo, hi) = (xi[0], xi[xi.len() - 1]);
    let center = rng.gen_range(lo + 0.1 * (hi - lo)..hi - 0.1 * (hi - lo));
    let reach = (center - lo).min(hi - center);
    let half = rng.gen_range(0.2 * reach..0.95 * reach);
    bump_direction(xi, center, half, rng.gen_range(-1.0..1.0))
}
