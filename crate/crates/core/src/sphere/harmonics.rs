//! Orthonormal complex spherical harmonics with the Condon-Shortley phase.
//!
//! `Y_lm(θ, φ) = P̄_lm(cos θ) e^{imφ}` for `m ≥ 0`, where `P̄_lm` carries both the
//! normalization and the `(-1)^m` phase, and `Y_{l,-m} = (-1)^m conj(Y_lm)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::grid::SphereGrid;
use crate::error::{Error, Result};

/// Flat index of `(l, m)` in a coefficient vector: `l² + l + m`.
#[inline]
pub fn lm_index(l: usize, m: i64) -> usize {
    ((l * l + l) as i64 + m) as usize
}

/// Number of `(l, m)` pairs with `l ≤ l_max`.
#[inline]
pub fn n_coeffs(l_max: usize) -> usize {
    (l_max + 1) * (l_max + 1)
}

/// Inverse of [`lm_index`].
pub fn lm_from_index(k: usize) -> (usize, i64) {
    let l = (k as f64).sqrt() as usize;
    let l = if (l + 1) * (l + 1) <= k { l + 1 } else { l };
    (l, k as i64 - (l * l + l) as i64)
}

/// Normalized associated Legendre values `P̄_lm(x)` and `dP̄_lm/dx` for
/// `0 ≤ m ≤ l ≤ l_max`, stored at `lm_index(l, m)` (negative-m slots unused).
///
/// `x` must lie strictly inside `(-1, 1)` for the derivative.
pub fn legendre_with_derivative(l_max: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
    let n = n_coeffs(l_max);
    let mut p = vec![0.0; n];
    let mut dp = vec![0.0; n];
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0 / (4.0 * PI).sqrt();
    for m in 0..=l_max {
        if m > 0 {
            let mf = m as f64;
            pmm *= -((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s;
        }
        p[lm_index(m, m as i64)] = pmm;
        if m < l_max {
            p[lm_index(m + 1, m as i64)] = (2.0 * m as f64 + 3.0).sqrt() * x * pmm;
        }
        for l in (m + 2)..=l_max {
            let lf = l as f64;
            let mf = m as f64;
            let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
            let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0)).sqrt();
            p[lm_index(l, m as i64)] =
                a * (x * p[lm_index(l - 1, m as i64)] - b * p[lm_index(l - 2, m as i64)]);
        }
    }
    let denom = x * x - 1.0;
    for l in 0..=l_max {
        let lf = l as f64;
        for m in 0..=l {
            let mf = m as f64;
            let lower = if l > m {
                ((2.0 * lf + 1.0) / (2.0 * lf - 1.0) * (lf - mf) * (lf + mf)).sqrt()
                    * p[lm_index(l - 1, m as i64)]
            } else {
                0.0
            };
            dp[lm_index(l, m as i64)] = (lf * x * p[lm_index(l, m as i64)] - lower) / denom;
        }
    }
    (p, dp)
}

/// Value of `Y_lm(θ, φ)`.
pub fn eval_harmonic(l: usize, m: i64, theta: f64, phi: f64) -> Result<Complex64> {
    if m.unsigned_abs() as usize > l {
        return Err(Error::InvalidArgument(format!("|m| = {} exceeds l = {l}", m.abs())));
    }
    let (p, _) = legendre_with_derivative(l, theta.cos());
    let ma = m.unsigned_abs() as usize;
    let val = p[lm_index(l, ma as i64)];
    let y = Complex64::from_polar(val, ma as f64 * phi);
    if m < 0 {
        let sign = if ma % 2 == 0 { 1.0 } else { -1.0 };
        Ok(y.conj() * sign)
    } else {
        Ok(y)
    }
}

/// Precomputed Legendre rings and azimuthal phases for one grid and band limit.
#[derive(Debug, Clone)]
pub(crate) struct HarmonicTable {
    /// `p[i][lm_index(l, m)]` for ring `i`, `m ≥ 0`.
    pub p: Vec<Vec<f64>>,
    pub dp: Vec<Vec<f64>>,
    /// `phase[j][m] = e^{i m φ_j}` for `0 ≤ m ≤ l_max`.
    pub phase: Vec<Vec<Complex64>>,
}

impl HarmonicTable {
    pub fn new(grid: &SphereGrid, l_max: usize) -> Self {
        let mut p = Vec::with_capacity(grid.n_theta());
        let mut dp = Vec::with_capacity(grid.n_theta());
        for &x in grid.cos_theta() {
            let (a, b) = legendre_with_derivative(l_max, x);
            p.push(a);
            dp.push(b);
        }
        let phase = grid
            .phi()
            .iter()
            .map(|&ph| (0..=l_max).map(|m| Complex64::from_polar(1.0, m as f64 * ph)).collect())
            .collect();
        Self { p, dp, phase }
    }

    /// `P̄` factor for signed `m` (includes the `(-1)^m` of negative orders).
    #[inline]
    pub fn p_signed(&self, ring: usize, l: usize, m: i64) -> f64 {
        let ma = m.unsigned_abs() as usize;
        let v = self.p[ring][lm_index(l, ma as i64)];
        if m < 0 && ma % 2 == 1 {
            -v
        } else {
            v
        }
    }

    #[inline]
    pub fn dp_signed(&self, ring: usize, l: usize, m: i64) -> f64 {
        let ma = m.unsigned_abs() as usize;
        let v = self.dp[ring][lm_index(l, ma as i64)];
        if m < 0 && ma % 2 == 1 {
            -v
        } else {
            v
        }
    }

    /// `e^{i m φ_j}` for signed `m`.
    #[inline]
    pub fn phase_signed(&self, j: usize, m: i64) -> Complex64 {
        let z = self.phase[j][m.unsigned_abs() as usize];
        if m < 0 {
            z.conj()
        } else {
            z
        }
    }
}
