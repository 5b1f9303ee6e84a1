//! Seeded random real fields and configurations for tests and experiments.

use num_complex::Complex64;
use rand::Rng;

use crate::gauge::{AdjointScalar, GaugeConfig, GaugeParameter};
use crate::sphere::HarmonicField;

/// Random real field of band limit `l_max`, coefficients uniform in
/// `[-scale, scale]` (both parts for `m > 0`).
pub fn random_field<R: Rng>(rng: &mut R, l_max: usize, scale: f64) -> HarmonicField {
    let mut f = HarmonicField::zeros(l_max);
    for l in 0..=l_max {
        let c0 = rng.gen_range(-scale..=scale);
        f.set(l, 0, Complex64::new(c0, 0.0)).unwrap();
        for m in 1..=l as i64 {
            let c = Complex64::new(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale));
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            f.set(l, m, c).unwrap();
            f.set(l, -m, c.conj() * sign).unwrap();
        }
    }
    f
}

/// Random real field with no `l = 0` component.
pub fn random_field_no_zero_mode<R: Rng>(rng: &mut R, l_max: usize, scale: f64) -> HarmonicField {
    let mut f = random_field(rng, l_max, scale);
    f.set(0, 0, Complex64::new(0.0, 0.0)).unwrap();
    f
}

pub fn random_config<R: Rng>(rng: &mut R, dim: usize, l_max: usize, coupling: f64, scale: f64) -> GaugeConfig {
    let a = (0..dim).map(|_| random_field(rng, l_max, scale)).collect();
    let da = (0..dim)
        .map(|_| (0..dim).map(|_| random_field(rng, l_max, scale)).collect())
        .collect();
    GaugeConfig::new(a, da, coupling).expect("random fields are real and consistent")
}

pub fn random_scalar<R: Rng>(rng: &mut R, dim: usize, l_max: usize, scale: f64) -> AdjointScalar {
    let phi = random_field(rng, l_max, scale);
    let dphi = (0..dim).map(|_| random_field(rng, l_max, scale)).collect();
    AdjointScalar::new(phi, dphi).expect("random fields are real")
}

/// Random parameter with a symmetric random Hessian.
pub fn random_parameter<R: Rng>(rng: &mut R, dim: usize, l_max: usize, scale: f64) -> GaugeParameter {
    let omega = random_field(rng, l_max, scale);
    let d_omega = (0..dim).map(|_| random_field(rng, l_max, scale)).collect();
    let mut p = GaugeParameter::new(omega, d_omega);
    for nu in 0..dim {
        for mu in 0..=nu {
            let h = random_field(rng, l_max, scale);
            p.dd_omega[nu][mu] = h.clone();
            p.dd_omega[mu][nu] = h;
        }
    }
    p
}
