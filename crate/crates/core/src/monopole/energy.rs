use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;

use super::density::{first_line, second_line, SecondLineCoefficients};
use super::MonopoleProfile;
use crate::error::{Error, Result};
use crate::stats::linear_fit;

/// Largest relative change of either integral between the grid and its
/// every-other-node coarsening.
pub const ENERGY_CONVERGENCE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrefactorParams {
    pub v: f64,
    pub beta: f64,
    pub e: f64,
    pub b: f64,
}

impl Default for PrefactorParams {
    fn default() -> Self {
        Self { v: 1.0, beta: 1.0, e: 1.0, b: 1.0 }
    }
}

impl PrefactorParams {
    pub fn validate(&self) -> Result<()> {
        for (name, x) in [("v", self.v), ("beta", self.beta), ("e", self.e), ("b", self.b)] {
            if !(x > 0.0 && x.is_finite()) {
                return Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {x}")));
            }
        }
        Ok(())
    }

    /// `8π² v β / (e³ b²)`, the BPS mass.
    pub fn prefactor(&self) -> f64 {
        8.0 * PI * PI * self.v * self.beta / (self.e.powi(3) * self.b * self.b)
    }

    /// Regular background flux needs `e = 2/n` for an integer `n`.
    pub fn quantization_warning(&self) -> Option<String> {
        let n = 2.0 / self.e;
        let r = n.round();
        ((n - r).abs() > 1e-9 * n.abs().max(1.0) || r == 0.0)
            .then(|| format!("e = {} is not of the form 2/n (2/e = {n})", self.e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    /// First line over `[0, ∞)`: the grid integral plus the analytic head on
    /// `[0, ξ₀]` and the tail beyond `Ξ` with `K = 0`, `H = ξ − h`.
    #[serde(rename = "E0_integral")]
    pub e0_integral: f64,
    /// First line over `[ξ₀, Ξ]` only.
    #[serde(rename = "E0_truncated")]
    pub e0_truncated: f64,
    pub head: f64,
    pub tail: f64,
    /// Second line over `[ξ₀, Ξ]`, before the `ε` factor; grows with `Ξ`.
    pub correction_integral: f64,
    pub min_first_line_integrand: f64,
    pub min_second_line_integrand: f64,
    pub evb: f64,
    pub epsilon: f64,
    pub prefactor: f64,
    /// `prefactor (E0_integral + ε correction_integral)`.
    pub total: f64,
    pub cutoff: f64,
    pub xi_min: f64,
    pub n_points: usize,
    /// Relative change of `(E0_integral, correction_integral)` on the coarsened grid.
    pub coarse_change: (f64, f64),
    pub warnings: Vec<String>,
}

struct Integrals {
    e0_truncated: f64,
    head: f64,
    tail: f64,
    c1: f64,
    min_f1: f64,
    min_f2: f64,
}

fn integrals(p: &MonopoleProfile, c: &SecondLineCoefficients) -> Integrals {
    let xi = p.grid.xi();
    let jets = p.jets();
    let f1: Vec<f64> = xi.iter().zip(&jets).map(|(&x, &y)| first_line(x, y)).collect();
    let f2: Vec<f64> = xi.iter().zip(&jets).map(|(&x, &y)| second_line(x, y, c)).collect();
    let n = xi.len();
    let cutoff = xi[n - 1];
    // f₁ ∝ ξ² at a regular origin.
    let head = xi[0] * f1[0] / 3.0;
    let h = cutoff - p.h[n - 1];
    let tail = (h * h + 1.0) / (2.0 * cutoff);
    Integrals {
        e0_truncated: p.grid.integrate(&f1),
        head,
        tail,
        c1: p.grid.integrate(&f2),
        min_f1: f1.iter().copied().fold(f64::INFINITY, f64::min),
        min_f2: f2.iter().copied().fold(f64::INFINITY, f64::min),
    }
}

fn rel_change(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(1.0)
}

/// Both lines of the radial energy with the physical prefactor, first order
/// in `ε = (evb)⁴/30`.
pub fn energy(
    p: &MonopoleProfile,
    evb: f64,
    params: &PrefactorParams,
    coefficients: &SecondLineCoefficients,
) -> Result<EnergyBreakdown> {
    params.validate()?;
    if !(evb >= 0.0 && evb.is_finite()) {
        return Err(Error::InvalidArgument(format!("evb must be non-negative, got {evb}")));
    }
    if p.k.iter().chain(&p.h).any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("profile contains non-finite values".into()));
    }
    let fine = integrals(p, coefficients);
    let e0 = fine.head + fine.e0_truncated + fine.tail;
    let coarse_change = match p.coarsened() {
        Some(cp) => {
            let coarse = integrals(&cp, coefficients);
            (rel_change(e0, coarse.head + coarse.e0_truncated + coarse.tail), rel_change(fine.c1, coarse.c1))
        }
        None => return Err(Error::Convergence(format!("{} points cannot be coarsened", p.grid.len()))),
    };
    if coarse_change.0 > ENERGY_CONVERGENCE_TOL || coarse_change.1 > ENERGY_CONVERGENCE_TOL {
        return Err(Error::Convergence(format!(
            "halving the resolution changes the integrals by {:e} and {:e} (n = {}, cutoff {})",
            coarse_change.0,
            coarse_change.1,
            p.grid.len(),
            p.grid.cutoff()
        )));
    }
    let epsilon = evb.powi(4) / 30.0;
    let prefactor = params.prefactor();
    Ok(EnergyBreakdown {
        e0_integral: e0,
        e0_truncated: fine.e0_truncated,
        head: fine.head,
        tail: fine.tail,
        correction_integral: fine.c1,
        min_first_line_integrand: fine.min_f1,
        min_second_line_integrand: fine.min_f2,
        evb,
        epsilon,
        prefactor,
        total: prefactor * (e0 + epsilon * fine.c1),
        cutoff: p.grid.cutoff(),
        xi_min: p.grid.xi()[0],
        n_points: p.grid.len(),
        coarse_change,
        warnings: params.quantization_warning().into_iter().collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyScanRow {
    pub evb: f64,
    pub epsilon: f64,
    #[serde(rename = "E0_integral")]
    pub e0_integral: f64,
    pub correction_integral: f64,
    /// `ε correction_integral / E0_integral`.
    pub de_over_e0: f64,
    pub cutoff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyScan {
    pub rows: Vec<EnergyScanRow>,
    /// Least-squares line of `ΔE/E₀` against `ε`; absent with fewer than two distinct `ε`.
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub r_squared: Option<f64>,
    pub warnings: Vec<String>,
}

/// First-order energy shift `ΔE = E₀ ε c₁(Ξ)` along `evb_list`. The back
/// reaction of `(K₁, H₁)` enters at second order because the first line is
/// stationary at BPS.
pub fn energy_correction(
    base: &MonopoleProfile,
    evb_list: &[f64],
    params: &PrefactorParams,
    coefficients: &SecondLineCoefficients,
) -> Result<EnergyScan> {
    if evb_list.is_empty() {
        return Err(Error::InvalidArgument("evb list is empty".into()));
    }
    let mut rows = Vec::with_capacity(evb_list.len());
    let mut warnings = Vec::new();
    for &evb in evb_list {
        let e = energy(base, evb, params, coefficients)?;
        warnings = e.warnings;
        rows.push(EnergyScanRow {
            evb,
            epsilon: e.epsilon,
            e0_integral: e.e0_integral,
            correction_integral: e.correction_integral,
            de_over_e0: e.epsilon * e.correction_integral / e.e0_integral,
            cutoff: e.cutoff,
        });
    }
    let eps: Vec<f64> = rows.iter().map(|r| r.epsilon).collect();
    let de: Vec<f64> = rows.iter().map(|r| r.de_over_e0).collect();
    let fit = linear_fit(&eps, &de);
    Ok(EnergyScan {
        rows,
        slope: fit.map(|f| f.slope),
        intercept: fit.map(|f| f.intercept),
        r_squared: fit.map(|f| f.r_squared),
        warnings,
    })
}

/// CSV `evb,epsilon,E0_integral,correction_integral,dE_over_E0,cutoff`.
pub fn energy_scan_csv(scan: &EnergyScan) -> String {
    let mut out = String::from("evb,epsilon,E0_integral,correction_integral,dE_over_E0,cutoff\n");
    for r in &scan.rows {
        writeln!(
            out,
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.evb, r.epsilon, r.e0_integral, r.correction_integral, r.de_over_e0, r.cutoff
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monopole::{bps_dh, bps_dk, bps_h, bps_k, bps_profiles, RadialGrid};

    fn bps(cutoff: f64, n: usize) -> MonopoleProfile {
        bps_profiles(&RadialGrid::new(cutoff, n).unwrap())
    }

    #[test]
    fn bps_first_line_is_one() {
        let e = energy(&bps(25.0, 4000), 0.0, &PrefactorParams::default(), &Default::default()).unwrap();
        assert!((e.e0_integral - 1.0).abs() < 1e-8, "{e:?}");
        // Without the tail the integral is the boundary term H(1 − K²)/ξ ≈ 1 − 1/Ξ.
        assert!((e.e0_truncated - (1.0 - 1.0 / 25.0)).abs() < 1e-8);
        assert!(e.coarse_change.0 < 1e-6);
    }

    #[test]
    fn closed_form_quadrature_oracle() {
        // Same first-line integral from exact derivatives and a plain
        // trapezoid rule on a fine uniform grid.
        let n = 200_000;
        let (a, b) = (1e-3, 25.0);
        let step = (b - a) / n as f64;
        let f = |x: f64| {
            let y = crate::monopole::Jet { k: bps_k(x), dk: bps_dk(x), h: bps_h(x), dh: bps_dh(x) };
            first_line(x, y)
        };
        let mut s = 0.5 * (f(a) + f(b));
        for i in 1..n {
            s += f(a + i as f64 * step);
        }
        let e = energy(&bps(25.0, 4000), 0.0, &PrefactorParams::default(), &Default::default()).unwrap();
        assert!((s * step - e.e0_truncated).abs() < 1e-7);
    }

    #[test]
    fn cutoff_and_resolution_independence() {
        let p = PrefactorParams::default();
        let c = SecondLineCoefficients::default();
        let a = energy(&bps(25.0, 4000), 0.0, &p, &c).unwrap();
        let b = energy(&bps(30.0, 4800), 0.0, &p, &c).unwrap();
        let fine = energy(&bps(25.0, 7999), 0.0, &p, &c).unwrap();
        assert!((a.e0_integral - b.e0_integral).abs() < 1e-8);
        assert!((a.e0_integral - fine.e0_integral).abs() < 1e-6);
        // The printed second line grows like Ξ³.
        assert!(b.correction_integral > 1.5 * a.correction_integral);
    }

    #[test]
    fn totals_and_scan() {
        let params = PrefactorParams { v: 2.0, beta: 0.5, e: 0.5, b: 0.3 };
        let c = SecondLineCoefficients::default();
        let base = bps(25.0, 4000);
        let e = energy(&base, 0.2, &params, &c).unwrap();
        let expected = 8.0 * PI * PI * 2.0 * 0.5 / (0.125 * 0.09);
        assert!((e.prefactor - expected).abs() < 1e-12 * expected);
        assert!((e.total - e.prefactor * (e.e0_integral + 0.2f64.powi(4) / 30.0 * e.correction_integral)).abs() < 1e-9 * e.total);
        assert!(e.total > e.prefactor);
        assert!(e.warnings.is_empty());
        assert!(e.min_first_line_integrand >= 0.0 && e.min_second_line_integrand >= 0.0);
        let s = energy_correction(&base, &[0.0, 0.1, 0.2, 0.4], &params, &c).unwrap();
        assert_eq!(s.rows[0].de_over_e0, 0.0);
        assert!((s.rows[3].epsilon / s.rows[2].epsilon - 16.0).abs() < 1e-12);
        assert!(s.r_squared.unwrap() > 0.9999);
        assert_eq!(energy_scan_csv(&s).lines().count(), 5);
        let warn = PrefactorParams { e: 0.3, ..params };
        assert_eq!(energy(&base, 0.0, &warn, &c).unwrap().warnings.len(), 1);
        assert!(energy(&base, -1.0, &params, &c).is_err());
        assert!(energy(&base, 0.0, &PrefactorParams { b: 0.0, ..params }, &c).is_err());
    }

    #[test]
    fn vacuum_has_zero_first_line() {
        let grid = RadialGrid::graded(1e-3, 2.0, 401, 1.0).unwrap();
        let n = grid.len();
        let p = MonopoleProfile::new(grid, vec![1.0; n], vec![0.0; n]).unwrap();
        let f = integrals(&p, &SecondLineCoefficients::default());
        assert_eq!((f.e0_truncated, f.head, f.c1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let e = energy(&bps(25.0, 40), 0.0, &PrefactorParams::default(), &Default::default());
        assert!(matches!(e, Err(Error::Convergence(_))));
    }
}
