//! U(∞)-valued gauge fields at one spacetime point, represented as jets
//! (values plus first spacetime derivatives) of harmonic fields.

use num_complex::Complex64;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::sphere::{bracket, HarmonicField};

/// `A_μ` and `∂_ν A_μ` at a point, with the bracket coupling.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeConfig {
    dim: usize,
    /// `a[μ]`
    a: Vec<HarmonicField>,
    /// `da[ν][μ] = ∂_ν A_μ`
    da: Vec<Vec<HarmonicField>>,
    coupling: f64,
}

/// Adjoint scalar `φ` and `∂_μ φ` at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjointScalar {
    pub phi: HarmonicField,
    pub dphi: Vec<HarmonicField>,
}

/// Infinitesimal gauge parameter `ω` with its first and second spacetime derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeParameter {
    pub omega: HarmonicField,
    pub d_omega: Vec<HarmonicField>,
    /// `dd_omega[ν][μ] = ∂_ν ∂_μ ω`, symmetric.
    pub dd_omega: Vec<Vec<HarmonicField>>,
}

fn common_band(fields: impl IntoIterator<Item = usize>) -> usize {
    fields.into_iter().max().unwrap_or(0)
}

fn check_real(name: &str, f: &HarmonicField) -> Result<()> {
    if !f.is_real(1e-10) {
        return Err(Error::InvalidArgument(format!(
            "{name} is not real (residual {:e})",
            f.reality_residual()
        )));
    }
    Ok(())
}

impl GaugeConfig {
    /// Builds a configuration, padding every component to the common band limit.
    pub fn new(a: Vec<HarmonicField>, da: Vec<Vec<HarmonicField>>, coupling: f64) -> Result<Self> {
        let dim = a.len();
        if dim == 0 {
            return Err(Error::InvalidArgument("spacetime dimension must be positive".into()));
        }
        if da.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: da.len() });
        }
        for row in &da {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: row.len() });
            }
        }
        for (mu, f) in a.iter().enumerate() {
            check_real(&format!("A[{mu}]"), f)?;
        }
        for (nu, row) in da.iter().enumerate() {
            for (mu, f) in row.iter().enumerate() {
                check_real(&format!("dA[{nu}][{mu}]"), f)?;
            }
        }
        let l = common_band(a.iter().chain(da.iter().flatten()).map(|f| f.l_max()));
        let a = a.iter().map(|f| f.padded(l)).collect();
        let da = da.iter().map(|row| row.iter().map(|f| f.padded(l)).collect()).collect();
        Ok(Self { dim, a, da, coupling })
    }

    pub fn zero(dim: usize, l_max: usize, coupling: f64) -> Self {
        let z = HarmonicField::zeros(l_max);
        Self {
            dim,
            a: vec![z.clone(); dim],
            da: vec![vec![z; dim]; dim],
            coupling,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn with_coupling(&self, coupling: f64) -> Self {
        Self { coupling, ..self.clone() }
    }

    pub fn l_max(&self) -> usize {
        self.a[0].l_max()
    }

    pub fn a(&self, mu: usize) -> &HarmonicField {
        &self.a[mu]
    }

    /// `∂_ν A_μ`
    pub fn da(&self, nu: usize, mu: usize) -> &HarmonicField {
        &self.da[nu][mu]
    }

    /// Multiplies every component (values and derivatives) by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            a: self.a.iter().map(|f| f * s).collect(),
            da: self.da.iter().map(|r| r.iter().map(|f| f * s).collect()).collect(),
            coupling: self.coupling,
        }
    }

    fn check_index(&self, idx: usize) -> Result<()> {
        if idx >= self.dim {
            return Err(Error::IndexOutOfRange { index: idx, dim: self.dim });
        }
        Ok(())
    }

    /// `F̃_μν = ∂_μA_ν − ∂_νA_μ + coupling {A_μ, A_ν}`; band limit `2 l_max`.
    pub fn field_strength(&self, mu: usize, nu: usize) -> Result<HarmonicField> {
        self.check_index(mu)?;
        self.check_index(nu)?;
        let curl = &self.da[mu][nu] - &self.da[nu][mu];
        let br = bracket(&self.a[mu], &self.a[nu]);
        Ok(&curl + &(&br * self.coupling))
    }

    /// First-order gauge transformation with parameter `t`:
    /// `A_μ → A_μ + t(∂_μω + coupling {A_μ, ω})`, with `∂_νA_μ` updated by the
    /// product rule.
    pub fn gauge_transform(&self, p: &GaugeParameter, t: f64) -> Result<Self> {
        p.check(self.dim)?;
        let k = self.coupling;
        let mut a = Vec::with_capacity(self.dim);
        for mu in 0..self.dim {
            let delta = &p.d_omega[mu] + &(&bracket(&self.a[mu], &p.omega) * k);
            a.push(&self.a[mu] + &(&delta * t));
        }
        let mut da = vec![Vec::with_capacity(self.dim); self.dim];
        for nu in 0..self.dim {
            for mu in 0..self.dim {
                let delta = &(&p.dd_omega[nu][mu] + &(&bracket(&self.da[nu][mu], &p.omega) * k))
                    + &(&bracket(&self.a[mu], &p.d_omega[nu]) * k);
                da[nu].push(&self.da[nu][mu] + &(&delta * t));
            }
        }
        Self::new(a, da, k)
    }

    /// `D_μφ = ∂_μφ + coupling {A_μ, φ}`.
    pub fn covariant_derivative(&self, s: &AdjointScalar, mu: usize) -> Result<HarmonicField> {
        self.check_index(mu)?;
        if s.dphi.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: s.dphi.len() });
        }
        let br = bracket(&self.a[mu], &s.phi);
        Ok(&s.dphi[mu] + &(&br * self.coupling))
    }

    /// `Σ_μν η^μμ η^νν ∫ F̃_μν F̃_μν dΩ` for a diagonal metric `eta`.
    pub fn action_ym(&self, eta: &[f64]) -> Result<f64> {
        if eta.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: eta.len() });
        }
        let mut total = 0.0;
        for mu in 0..self.dim {
            for nu in 0..self.dim {
                if mu == nu {
                    continue;
                }
                let f = self.field_strength(mu, nu)?;
                total += f.integral_of_product(&f).re / (eta[mu] * eta[nu]);
            }
        }
        Ok(total)
    }

    /// `Σ_μ η^μμ ∫ (D_μφ)² dΩ`.
    pub fn action_scalar(&self, s: &AdjointScalar, eta: &[f64]) -> Result<f64> {
        if eta.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: eta.len() });
        }
        let mut total = 0.0;
        for (mu, &g) in eta.iter().enumerate() {
            let d = self.covariant_derivative(s, mu)?;
            total += d.integral_of_product(&d).re / g;
        }
        Ok(total)
    }
}

impl AdjointScalar {
    pub fn new(phi: HarmonicField, dphi: Vec<HarmonicField>) -> Result<Self> {
        check_real("phi", &phi)?;
        for (mu, f) in dphi.iter().enumerate() {
            check_real(&format!("dphi[{mu}]"), f)?;
        }
        let l = common_band(std::iter::once(phi.l_max()).chain(dphi.iter().map(|f| f.l_max())));
        Ok(Self {
            phi: phi.padded(l),
            dphi: dphi.iter().map(|f| f.padded(l)).collect(),
        })
    }

    pub fn zero(dim: usize, l_max: usize) -> Self {
        Self {
            phi: HarmonicField::zeros(l_max),
            dphi: vec![HarmonicField::zeros(l_max); dim],
        }
    }

    pub fn l_max(&self) -> usize {
        self.phi.l_max()
    }

    /// First-order adjoint transformation `φ → φ + t coupling {φ, ω}`, with
    /// `∂_μφ` updated by the product rule.
    pub fn gauge_transform(&self, p: &GaugeParameter, coupling: f64, t: f64) -> Result<Self> {
        p.check(self.dphi.len())?;
        let phi = &self.phi + &(&bracket(&self.phi, &p.omega) * (coupling * t));
        let dphi = self
            .dphi
            .iter()
            .enumerate()
            .map(|(mu, d)| {
                let delta = &bracket(d, &p.omega) + &bracket(&self.phi, &p.d_omega[mu]);
                d + &(&delta * (coupling * t))
            })
            .collect();
        Self::new(phi, dphi)
    }
}

impl GaugeParameter {
    /// Parameter with vanishing second derivatives.
    pub fn new(omega: HarmonicField, d_omega: Vec<HarmonicField>) -> Self {
        let dim = d_omega.len();
        let z = HarmonicField::zeros(omega.l_max());
        Self {
            omega,
            d_omega,
            dd_omega: vec![vec![z; dim]; dim],
        }
    }

    fn check(&self, dim: usize) -> Result<()> {
        check_real("omega", &self.omega)?;
        if self.d_omega.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: self.d_omega.len() });
        }
        if self.dd_omega.len() != dim || self.dd_omega.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, got: self.dd_omega.len() });
        }
        for nu in 0..dim {
            for mu in 0..nu {
                if (&self.dd_omega[nu][mu] - &self.dd_omega[mu][nu]).max_abs() > 1e-12 {
                    return Err(Error::InvalidArgument("dd_omega must be symmetric".into()));
                }
            }
        }
        Ok(())
    }
}

/// JSON bundle of named fields: `"A[mu]"`, `"dA[nu][mu]"`, `"phi"`, `"dphi[mu]"`,
/// plus `"coupling"` and `"D"`.
pub fn bundle_to_json(cfg: &GaugeConfig, scalar: Option<&AdjointScalar>) -> Value {
    let mut map = Map::new();
    map.insert("D".into(), Value::from(cfg.dim));
    map.insert("coupling".into(), Value::from(cfg.coupling));
    for mu in 0..cfg.dim {
        map.insert(format!("A[{mu}]"), cfg.a[mu].to_json_value());
    }
    for nu in 0..cfg.dim {
        for mu in 0..cfg.dim {
            map.insert(format!("dA[{nu}][{mu}]"), cfg.da[nu][mu].to_json_value());
        }
    }
    if let Some(s) = scalar {
        map.insert("phi".into(), s.phi.to_json_value());
        for (mu, f) in s.dphi.iter().enumerate() {
            map.insert(format!("dphi[{mu}]"), f.to_json_value());
        }
    }
    Value::Object(map)
}

/// Inverse of [`bundle_to_json`]. Missing derivative entries read as zero.
pub fn bundle_from_json(v: &Value) -> Result<(GaugeConfig, Option<AdjointScalar>)> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("bundle must be an object".into()))?;
    let dim = obj
        .get("D")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Parse("missing integer \"D\"".into()))? as usize;
    let coupling = obj
        .get("coupling")
        .and_then(Value::as_f64)
        .ok_or_else(|| Error::Parse("missing number \"coupling\"".into()))?;
    let field = |key: &str| -> Result<Option<HarmonicField>> {
        obj.get(key).map(HarmonicField::from_json_value).transpose()
    };
    let zero = HarmonicField::zeros(0);
    let mut a = Vec::with_capacity(dim);
    for mu in 0..dim {
        a.push(field(&format!("A[{mu}]"))?.unwrap_or_else(|| zero.clone()));
    }
    let mut da = vec![Vec::with_capacity(dim); dim];
    for (nu, row) in da.iter_mut().enumerate() {
        for mu in 0..dim {
            row.push(field(&format!("dA[{nu}][{mu}]"))?.unwrap_or_else(|| zero.clone()));
        }
    }
    let cfg = GaugeConfig::new(a, da, coupling)?;
    let scalar = match field("phi")? {
        Some(phi) => {
            let mut dphi = Vec::with_capacity(dim);
            for mu in 0..dim {
                dphi.push(field(&format!("dphi[{mu}]"))?.unwrap_or_else(|| zero.clone()));
            }
            Some(AdjointScalar::new(phi, dphi)?)
        }
        None => None,
    };
    Ok((cfg, scalar))
}

/// Pure `l = 0` parameter `ω = c Y_00` with zero derivatives.
pub fn constant_parameter(dim: usize, c: f64) -> GaugeParameter {
    let omega = HarmonicField::mode(0, 0, Complex64::new(c, 0.0)).expect("valid mode");
    GaugeParameter::new(omega, vec![HarmonicField::zeros(0); dim])
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::random::{random_config, random_parameter, random_scalar};

    #[test]
    fn constant_modes_give_abelian_curl() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let cfg = random_config(&mut rng, 3, 0, 1.0, 0.8);
        for mu in 0..3 {
            for nu in 0..3 {
                let f = cfg.field_strength(mu, nu).unwrap();
                let curl = cfg.da(mu, nu) - cfg.da(nu, mu);
                assert!((&f - &curl).max_abs() < 1e-15);
            }
        }
    }

    #[test]
    fn zero_coupling_is_abelian_curl() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let cfg = random_config(&mut rng, 3, 2, 0.0, 1.0);
        let f = cfg.field_strength(0, 2).unwrap();
        let curl = cfg.da(0, 2) - cfg.da(2, 0);
        assert_eq!((&f - &curl).max_abs(), 0.0);
    }

    #[test]
    fn field_strength_is_antisymmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let cfg = random_config(&mut rng, 4, 3, 1.3, 1.0);
        for mu in 0..4 {
            for nu in 0..4 {
                let s = &cfg.field_strength(mu, nu).unwrap() + &cfg.field_strength(nu, mu).unwrap();
                assert!(s.max_abs() < 1e-12);
            }
        }
    }

    #[test]
    fn index_out_of_range() {
        let cfg = GaugeConfig::zero(2, 1, 1.0);
        assert!(matches!(cfg.field_strength(0, 2), Err(Error::IndexOutOfRange { .. })));
        let s = AdjointScalar::zero(2, 1);
        assert!(cfg.covariant_derivative(&s, 5).is_err());
    }

    #[test]
    fn identity_transforms() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let cfg = random_config(&mut rng, 3, 2, 0.7, 1.0);
        let p = random_parameter(&mut rng, 3, 2, 1.0);
        let same = cfg.gauge_transform(&p, 0.0).unwrap();
        for mu in 0..3 {
            assert!((same.a(mu) - cfg.a(mu)).max_abs() < 1e-15);
        }
        let c = constant_parameter(3, 0.9);
        let same = cfg.gauge_transform(&c, 0.5).unwrap();
        for mu in 0..3 {
            assert!((same.a(mu) - cfg.a(mu)).max_abs() < 1e-15);
            for nu in 0..3 {
                assert!((same.da(nu, mu) - cfg.da(nu, mu)).max_abs() < 1e-15);
            }
        }
    }

    #[test]
    fn covariant_derivative_trivial_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let s = random_scalar(&mut rng, 2, 2, 1.0);
        let cfg = GaugeConfig::zero(2, 2, 1.0);
        let d = cfg.covariant_derivative(&s, 1).unwrap();
        assert_eq!((&d - &s.dphi[1]).max_abs(), 0.0);
        let cfg = random_config(&mut rng, 2, 2, 1.0, 1.0);
        let mut constant = AdjointScalar::zero(2, 0);
        constant.phi = HarmonicField::mode(0, 0, Complex64::new(2.0, 0.0)).unwrap();
        constant.dphi = s.dphi.clone();
        let d = cfg.covariant_derivative(&constant, 0).unwrap();
        assert!((&d - &s.dphi[0]).max_abs() < 1e-14);
    }

    #[test]
    fn bundle_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let cfg = random_config(&mut rng, 2, 2, 0.5, 1.0);
        let s = random_scalar(&mut rng, 2, 2, 1.0);
        let v = bundle_to_json(&cfg, Some(&s));
        assert!(v.get("dA[1][0]").is_some());
        let (cfg2, s2) = bundle_from_json(&v).unwrap();
        assert_eq!(cfg2, cfg);
        assert_eq!(s2.unwrap(), s);
    }

    #[test]
    fn rejects_complex_components() {
        let f = HarmonicField::mode(1, 1, Complex64::new(1.0, 0.0)).unwrap();
        let z = HarmonicField::zeros(1);
        let err = GaugeConfig::new(vec![f], vec![vec![z]], 1.0);
        assert!(err.is_err());
    }
}
