//! BPS monopole of the reduced Yang-Mills-Higgs system in the spherical ansatz.
//!
//! Profiles live on a graded radial grid `ξ(u) = ξ₀ + L(βu + (1 − β)u²)` with
//! `u` uniform on `[0, 1]`. Derivatives are 4th-order differences in `u`
//! divided by `dξ/du`; integrals are composite Simpson in `u`.

mod config;
mod density;
mod energy;
mod perturb;
mod variational;

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

pub use config::MonopoleConfig;
pub use density::{first_line, full_density, second_line, HyperDual, Jet, Real, SecondLineCoefficients};
pub use energy::{
    energy, energy_correction, energy_scan_csv, EnergyBreakdown, EnergyScan, EnergyScanRow, PrefactorParams,
    ENERGY_CONVERGENCE_TOL,
};
pub use perturb::{
    asymptotics, perturbation_solve, Asymptotics, Perturbation, ORIGIN_EXPONENT, ORIGIN_EXPONENT_TOL, TAIL_SLOPE,
    TAIL_SLOPE_TOL,
};
pub use variational::{
    bump_direction, perturbed_profile, random_bump, random_direction, variational_check, VariationalReport, STATIONARITY_TOL, VARIATIONAL_TOL,
};

/// Default left end of the grid. Profiles are regular there: `K = 1 − ξ²/6`.
pub const DEFAULT_XI_MIN: f64 = 1e-3;
pub const DEFAULT_GRADING: f64 = 0.25;
pub const BOGOMOLNYI_TOL: f64 = 1e-8;
/// Allowed deviation of the BPS first-line integral from 1.
pub const FIRST_LINE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grading {
    pub xi_min: f64,
    pub xi_max: f64,
    /// Fraction of the linear part of the map; 1 is uniform.
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialGrid {
    pub spacing: Grading,
    xi: Vec<f64>,
    jacobian: Vec<f64>,
    du: f64,
}

impl RadialGrid {
    pub fn graded(xi_min: f64, xi_max: f64, n: usize, beta: f64) -> Result<Self> {
        if !(xi_min > 0.0) || !(xi_max > xi_min) || !xi_max.is_finite() {
            return Err(Error::InvalidArgument(format!("need 0 < xi_min < xi_max, got {xi_min}, {xi_max}")));
        }
        if n < 6 {
            return Err(Error::InvalidArgument(format!("need at least 6 grid points, got {n}")));
        }
        if !(beta > 0.0 && beta <= 1.0) {
            return Err(Error::InvalidArgument(format!("grading must lie in (0, 1], got {beta}")));
        }
        let len = xi_max - xi_min;
        let du = 1.0 / (n - 1) as f64;
        let xi = (0..n)
            .map(|i| {
                if i == n - 1 {
                    xi_max
                } else {
                    let u = i as f64 * du;
                    xi_min + len * (beta * u + (1.0 - beta) * u * u)
                }
            })
            .collect();
        let jacobian = (0..n).map(|i| len * (beta + 2.0 * (1.0 - beta) * i as f64 * du)).collect();
        Ok(Self { spacing: Grading { xi_min, xi_max, beta }, xi, jacobian, du })
    }

    pub fn new(xi_max: f64, n: usize) -> Result<Self> {
        Self::graded(DEFAULT_XI_MIN, xi_max, n, DEFAULT_GRADING)
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    pub fn cutoff(&self) -> f64 {
        self.spacing.xi_max
    }

    /// Every other node, keeping `Ξ`. With an odd interval count the first
    /// node is dropped. Returns the grid and the index of its first node.
    pub fn coarsened(&self) -> Option<(Self, usize)> {
        let n = self.len();
        if n < 12 {
            return None;
        }
        let start = (n - 1) % 2;
        let pick = |v: &[f64]| v.iter().skip(start).step_by(2).copied().collect::<Vec<f64>>();
        let xi = pick(&self.xi);
        let spacing = Grading { xi_min: xi[0], ..self.spacing };
        Some((Self { spacing, xi, jacobian: pick(&self.jacobian), du: 2.0 * self.du }, start))
    }

    /// `d/dξ` with 4th-order differences in `u`.
    pub fn derivative(&self, y: &[f64]) -> Vec<f64> {
        let n = self.len();
        let c = 1.0 / (12.0 * self.du);
        (0..n)
            .map(|i| {
                let d = if i == 0 {
                    -25.0 * y[0] + 48.0 * y[1] - 36.0 * y[2] + 16.0 * y[3] - 3.0 * y[4]
                } else if i == 1 {
                    -3.0 * y[0] - 10.0 * y[1] + 18.0 * y[2] - 6.0 * y[3] + y[4]
                } else if i == n - 2 {
                    3.0 * y[n - 1] + 10.0 * y[n - 2] - 18.0 * y[n - 3] + 6.0 * y[n - 4] - y[n - 5]
                } else if i == n - 1 {
                    25.0 * y[n - 1] - 48.0 * y[n - 2] + 36.0 * y[n - 3] - 16.0 * y[n - 4] + 3.0 * y[n - 5]
                } else {
                    -y[i + 2] + 8.0 * y[i + 1] - 8.0 * y[i - 1] + y[i - 2]
                };
                d * c / self.jacobian[i]
            })
            .collect()
    }

    /// Quadrature weights for `∫ f dξ` over `[ξ₀, Ξ]`: Simpson in `u`, with a
    /// closing 3/8 panel when the interval count is odd.
    pub fn weights(&self) -> Vec<f64> {
        let n = self.len();
        let m = n - 1;
        let mut w = vec![0.0; n];
        let simpson_end = if m % 2 == 0 { m } else { m - 3 };
        for p in (0..simpson_end).step_by(2) {
            w[p] += self.du / 3.0;
            w[p + 1] += 4.0 * self.du / 3.0;
            w[p + 2] += self.du / 3.0;
        }
        if simpson_end < m {
            for (k, c) in [1.0, 3.0, 3.0, 1.0].into_iter().enumerate() {
                w[simpson_end + k] += 3.0 * self.du / 8.0 * c;
            }
        }
        w.iter_mut().zip(&self.jacobian).for_each(|(w, j)| *w *= j);
        w
    }

    pub fn integrate(&self, f: &[f64]) -> f64 {
        self.weights().iter().zip(f).map(|(w, f)| w * f).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonopoleProfile {
    pub grid: RadialGrid,
    pub k: Vec<f64>,
    pub h: Vec<f64>,
}

impl MonopoleProfile {
    pub fn new(grid: RadialGrid, k: Vec<f64>, h: Vec<f64>) -> Result<Self> {
        if k.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: k.len() });
        }
        if h.len() != grid.len() {
            return Err(Error::DimensionMismatch { expected: grid.len(), got: h.len() });
        }
        Ok(Self { grid, k, h })
    }

    pub fn coarsened(&self) -> Option<Self> {
        let (grid, start) = self.grid.coarsened()?;
        let pick = |v: &[f64]| v.iter().skip(start).step_by(2).copied().collect();
        Some(Self { grid, k: pick(&self.k), h: pick(&self.h) })
    }

    /// Values and 4th-order derivatives at every node.
    pub fn jets(&self) -> Vec<Jet<f64>> {
        let dk = self.grid.derivative(&self.k);
        let dh = self.grid.derivative(&self.h);
        (0..self.grid.len()).map(|i| Jet { k: self.k[i], dk: dk[i], h: self.h[i], dh: dh[i] }).collect()
    }

    /// `max(|1 − K(ξ₀)|, |H(ξ₀)|)` and `max(|K(Ξ)|, |H(Ξ)/Ξ − 1|)`.
    pub fn boundary_defects(&self) -> (f64, f64) {
        let n = self.grid.len();
        let origin = (1.0 - self.k[0]).abs().max(self.h[0].abs());
        let tail = self.k[n - 1].abs().max((self.h[n - 1] / self.grid.cutoff() - 1.0).abs());
        (origin, tail)
    }
}

/// `ξ / sinh ξ`.
pub fn bps_k(xi: f64) -> f64 {
    if xi < 1e-2 {
        let x2 = xi * xi;
        1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0
    } else {
        let t = (-xi).exp();
        2.0 * xi * t / (1.0 - t * t)
    }
}

/// `ξ coth ξ − 1`.
pub fn bps_h(xi: f64) -> f64 {
    if xi < 5e-2 {
        let x2 = xi * xi;
        x2 / 3.0 - x2 * x2 / 45.0 + 2.0 * x2 * x2 * x2 / 945.0
    } else {
        let t = (-2.0 * xi).exp();
        xi * (1.0 + t) / (1.0 - t) - 1.0
    }
}

/// `d/dξ (ξ / sinh ξ) = −K H / ξ`, the first Bogomol'nyi equation.
pub fn bps_dk(xi: f64) -> f64 {
    -bps_k(xi) * bps_h(xi) / xi
}

/// `d/dξ (ξ coth ξ − 1) = (H + 1 − K²)/ξ`, the second Bogomol'nyi equation.
pub fn bps_dh(xi: f64) -> f64 {
    let k = bps_k(xi);
    (bps_h(xi) + 1.0 - k * k) / xi
}

pub fn bps_profiles(grid: &RadialGrid) -> MonopoleProfile {
    let k = grid.xi.iter().map(|&x| bps_k(x)).collect();
    let h = grid.xi.iter().map(|&x| bps_h(x)).collect();
    MonopoleProfile { grid: grid.clone(), k, h }
}

/// Maxima of `|ξK′ + KH|` and `|ξH′ − H − (1 − K²)|` with grid derivatives.
pub fn bogomolnyi_residuals(p: &MonopoleProfile) -> (f64, f64) {
    let mut r = (0.0f64, 0.0f64);
    for (x, y) in p.grid.xi.iter().zip(p.jets()) {
        r.0 = r.0.max((x * y.dk + y.k * y.h).abs());
        r.1 = r.1.max((x * y.dh - y.h - (1.0 - y.k * y.k)).abs());
    }
    r
}

/// CSV `xi,K,H,K1,H1`; the perturbation columns are zero when absent.
pub fn profile_csv(p: &MonopoleProfile, pert: Option<&Perturbation>) -> String {
    let mut out = String::from("xi,K,H,K1,H1\n");
    for i in 0..p.grid.len() {
        let (k1, h1) = pert.map_or((0.0, 0.0), |q| (q.k1[i], q.h1[i]));
        writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}", p.grid.xi[i], p.k[i], p.h[i], k1, h1).unwrap();
    }
    out
}
