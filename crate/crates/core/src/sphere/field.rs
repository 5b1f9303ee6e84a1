use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::SphereGrid;
use super::harmonics::{lm_from_index, lm_index, n_coeffs, HarmonicTable};
use crate::error::{Error, Result};

/// Band-limited function on the unit sphere, stored as harmonic coefficients
/// `c_lm` for `l ≤ l_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicField {
    l_max: usize,
    coeffs: Vec<Complex64>,
}

/// Pointwise samples of a field and its angular derivatives on a grid.
#[derive(Debug, Clone)]
pub struct FieldSamples {
    pub value: Vec<Complex64>,
    /// `∂f/∂(cos θ)`
    pub d_dcos: Vec<Complex64>,
    /// `∂f/∂φ`
    pub d_dphi: Vec<Complex64>,
}

impl HarmonicField {
    pub fn zeros(l_max: usize) -> Self {
        Self {
            l_max,
            coeffs: vec![Complex64::new(0.0, 0.0); n_coeffs(l_max)],
        }
    }

    /// Field with a single nonzero coefficient.
    pub fn mode(l: usize, m: i64, c: Complex64) -> Result<Self> {
        let mut f = Self::zeros(l);
        f.set(l, m, c)?;
        Ok(f)
    }

    pub fn from_coeffs(l_max: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != n_coeffs(l_max) {
            return Err(Error::DimensionMismatch {
                expected: n_coeffs(l_max),
                got: coeffs.len(),
            });
        }
        Ok(Self { l_max, coeffs })
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `Y_lm`; zero outside the band limit.
    pub fn coeff(&self, l: usize, m: i64) -> Complex64 {
        if l > self.l_max || m.unsigned_abs() as usize > l {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[lm_index(l, m)]
        }
    }

    pub fn set(&mut self, l: usize, m: i64, c: Complex64) -> Result<()> {
        if m.unsigned_abs() as usize > l {
            return Err(Error::InvalidArgument(format!("|m| = {} exceeds l = {l}", m.abs())));
        }
        if l > self.l_max {
            return Err(Error::InvalidArgument(format!(
                "l = {l} exceeds band limit {}",
                self.l_max
            )));
        }
        self.coeffs[lm_index(l, m)] = c;
        Ok(())
    }

    /// Same field with band limit raised to `l_max` (zero padding).
    pub fn padded(&self, l_max: usize) -> Self {
        if l_max <= self.l_max {
            return self.clone();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n_coeffs(l_max), Complex64::new(0.0, 0.0));
        Self { l_max, coeffs }
    }

    /// Drops every coefficient with `l > l_max`.
    pub fn truncated(&self, l_max: usize) -> Self {
        if l_max >= self.l_max {
            return self.clone();
        }
        Self {
            l_max,
            coeffs: self.coeffs[..n_coeffs(l_max)].to_vec(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            l_max: self.l_max,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest violation of `c(l,-m) = (-1)^m conj(c(l,m))`.
    pub fn reality_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for l in 0..=self.l_max {
            for m in 0..=l as i64 {
                let c = self.coeffs[lm_index(l, m)];
                let cn = self.coeffs[lm_index(l, -m)];
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                worst = worst.max((cn - c.conj() * sign).norm());
            }
        }
        worst
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.reality_residual() <= tol
    }

    /// Projects onto the real subspace: `(f + conj-reflection(f)) / 2`.
    pub fn real_part(&self) -> Self {
        let mut out = self.clone();
        for l in 0..=self.l_max {
            for m in 0..=l as i64 {
                let c = self.coeffs[lm_index(l, m)];
                let cn = self.coeffs[lm_index(l, -m)];
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let avg = (c + cn.conj() * sign) * 0.5;
                out.coeffs[lm_index(l, m)] = avg;
                out.coeffs[lm_index(l, -m)] = avg.conj() * sign;
            }
        }
        out
    }

    /// `∫ f dΩ = √(4π) c_00`.
    pub fn integrate(&self) -> Complex64 {
        self.coeffs[0] * (4.0 * PI).sqrt()
    }

    /// `∫ f g dΩ` evaluated from coefficients (no conjugation).
    pub fn integral_of_product(&self, other: &HarmonicField) -> Complex64 {
        let l_max = self.l_max.min(other.l_max);
        let mut total = Complex64::new(0.0, 0.0);
        for l in 0..=l_max {
            for m in -(l as i64)..=l as i64 {
                let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                total += self.coeffs[lm_index(l, m)] * other.coeffs[lm_index(l, -m)] * sign;
            }
        }
        total
    }

    /// `∫ f conj(g) dΩ`.
    pub fn inner(&self, other: &HarmonicField) -> Complex64 {
        let l_max = self.l_max.min(other.l_max);
        (0..n_coeffs(l_max))
            .map(|k| self.coeffs[k] * other.coeffs[k].conj())
            .sum()
    }

    /// Nonzero coefficients as `(l, m, c)`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, i64, Complex64)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| c.re != 0.0 || c.im != 0.0).map(|(k, &c)| {
            let (l, m) = lm_from_index(k);
            (l, m, c)
        })
    }

    fn check_grid(&self, grid: &SphereGrid) -> Result<()> {
        grid.require_degree(2 * self.l_max)
    }

    /// Pointwise values `Σ c_lm Y_lm` at every grid node.
    pub fn synthesize(&self, grid: &SphereGrid) -> Result<Vec<Complex64>> {
        self.check_grid(grid)?;
        let table = HarmonicTable::new(grid, self.l_max);
        Ok(self.synthesize_with(grid, &table, false).value)
    }

    /// Values and both angular derivatives at every node.
    pub fn sample(&self, grid: &SphereGrid) -> Result<FieldSamples> {
        self.check_grid(grid)?;
        let table = HarmonicTable::new(grid, self.l_max);
        Ok(self.synthesize_with(grid, &table, true))
    }

    pub(crate) fn synthesize_with(
        &self,
        grid: &SphereGrid,
        table: &HarmonicTable,
        derivatives: bool,
    ) -> FieldSamples {
        let l_max = self.l_max;
        let n = grid.len();
        let zero = Complex64::new(0.0, 0.0);
        let mut value = vec![zero; n];
        let (mut d_dcos, mut d_dphi) = if derivatives {
            (vec![zero; n], vec![zero; n])
        } else {
            (Vec::new(), Vec::new())
        };
        let width = 2 * l_max + 1;
        let mut g = vec![zero; width];
        let mut gx = vec![zero; width];
        for i in 0..grid.n_theta() {
            for (slot, m) in (-(l_max as i64)..=l_max as i64).enumerate() {
                let mut acc = zero;
                let mut accx = zero;
                for l in m.unsigned_abs() as usize..=l_max {
                    let c = self.coeffs[lm_index(l, m)];
                    acc += c * table.p_signed(i, l, m);
                    if derivatives {
                        accx += c * table.dp_signed(i, l, m);
                    }
                }
                g[slot] = acc;
                gx[slot] = accx;
            }
            for j in 0..grid.n_phi() {
                let k = i * grid.n_phi() + j;
                let mut v = zero;
                let mut vx = zero;
                let mut vp = zero;
                for (slot, m) in (-(l_max as i64)..=l_max as i64).enumerate() {
                    let ph = table.phase_signed(j, m);
                    v += g[slot] * ph;
                    if derivatives {
                        vx += gx[slot] * ph;
                        vp += g[slot] * ph * Complex64::new(0.0, m as f64);
                    }
                }
                value[k] = v;
                if derivatives {
                    d_dcos[k] = vx;
                    d_dphi[k] = vp;
                }
            }
        }
        FieldSamples {
            value,
            d_dcos,
            d_dphi,
        }
    }

    /// Quadrature projection `c_lm = ∫ values · conj(Y_lm) dΩ`.
    pub fn analyze(values: &[Complex64], l_max: usize, grid: &SphereGrid) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: values.len(),
            });
        }
        grid.require_degree(2 * l_max)?;
        let table = HarmonicTable::new(grid, l_max);
        Ok(Self::analyze_with(values, l_max, grid, &table))
    }

    pub(crate) fn analyze_with(
        values: &[Complex64],
        l_max: usize,
        grid: &SphereGrid,
        table: &HarmonicTable,
    ) -> Self {
        let mut out = Self::zeros(l_max);
        let zero = Complex64::new(0.0, 0.0);
        for i in 0..grid.n_theta() {
            let w = grid.ring_weight(i);
            for m in -(l_max as i64)..=l_max as i64 {
                let mut fm = zero;
                for j in 0..grid.n_phi() {
                    fm += values[i * grid.n_phi() + j] * table.phase_signed(j, m).conj();
                }
                fm *= w;
                for l in m.unsigned_abs() as usize..=l_max {
                    out.coeffs[lm_index(l, m)] += fm * table.p_signed(i, l, m);
                }
            }
        }
        out
    }
}

impl Add for &HarmonicField {
    type Output = HarmonicField;
    fn add(self, rhs: &HarmonicField) -> HarmonicField {
        let l_max = self.l_max.max(rhs.l_max);
        let mut out = self.padded(l_max);
        for (k, c) in rhs.coeffs.iter().enumerate() {
            out.coeffs[k] += c;
        }
        out
    }
}

impl Sub for &HarmonicField {
    type Output = HarmonicField;
    fn sub(self, rhs: &HarmonicField) -> HarmonicField {
        let l_max = self.l_max.max(rhs.l_max);
        let mut out = self.padded(l_max);
        for (k, c) in rhs.coeffs.iter().enumerate() {
            out.coeffs[k] -= c;
        }
        out
    }
}

impl Neg for &HarmonicField {
    type Output = HarmonicField;
    fn neg(self) -> HarmonicField {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul<f64> for &HarmonicField {
    type Output = HarmonicField;
    fn mul(self, rhs: f64) -> HarmonicField {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CoeffEntry {
    l: usize,
    m: i64,
    re: f64,
    im: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FieldJson {
    l_max: usize,
    real: bool,
    coeffs: Vec<CoeffEntry>,
}

/// Tolerance used for the `real` flag written to JSON.
pub const REALITY_TOL: f64 = 1e-12;

impl HarmonicField {
    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = FieldJson {
            l_max: self.l_max,
            real: self.is_real(REALITY_TOL),
            coeffs: self
                .nonzero()
                .map(|(l, m, c)| CoeffEntry { l, m, re: c.re, im: c.im })
                .collect(),
        };
        serde_json::to_value(doc).expect("field serializes")
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self> {
        let doc: FieldJson =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut f = Self::zeros(doc.l_max);
        for e in doc.coeffs {
            f.set(e.l, e.m, Complex64::new(e.re, e.im))
                .map_err(|err| Error::Parse(err.to_string()))?;
        }
        if doc.real && !f.is_real(1e-9) {
            return Err(Error::Parse(format!(
                "field flagged real violates the reality condition by {:e}",
                f.reality_residual()
            )));
        }
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("field serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_value(&v)
    }
}
