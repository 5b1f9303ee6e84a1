//! Radial energy densities, generic over a scalar type so that hyper-dual
//! numbers give exact first and second partial derivatives.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

/// `a + b ε₁ + c ε₂ + d ε₁ε₂` with `ε₁² = ε₂² = 0`. Evaluating a polynomial at
/// `x + ε₁ + ε₂` puts `f′` in both infinitesimal parts and `f″` in `d` with no
/// truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperDual {
    pub re: f64,
    pub e1: f64,
    pub e2: f64,
    pub e12: f64,
}

impl HyperDual {
    pub const fn constant(re: f64) -> Self {
        Self { re, e1: 0.0, e2: 0.0, e12: 0.0 }
    }
}

impl Add for HyperDual {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { re: self.re + o.re, e1: self.e1 + o.e1, e2: self.e2 + o.e2, e12: self.e12 + o.e12 }
    }
}

impl Sub for HyperDual {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { re: self.re - o.re, e1: self.e1 - o.e1, e2: self.e2 - o.e2, e12: self.e12 - o.e12 }
    }
}

impl Mul for HyperDual {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            re: self.re * o.re,
            e1: self.re * o.e1 + self.e1 * o.re,
            e2: self.re * o.e2 + self.e2 * o.re,
            e12: self.re * o.e12 + self.e1 * o.e2 + self.e2 * o.e1 + self.e12 * o.re,
        }
    }
}

impl Mul<f64> for HyperDual {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self { re: self.re * s, e1: self.e1 * s, e2: self.e2 * s, e12: self.e12 * s }
    }
}

impl From<f64> for HyperDual {
    fn from(re: f64) -> Self {
        Self::constant(re)
    }
}

/// Ring operations the densities need.
pub trait Real: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Mul<f64, Output = Self> + From<f64> {}

impl Real for f64 {}
impl Real for HyperDual {}

/// Coefficients of the residual-interaction line. Defaults are the printed
/// ones; `xi_power` is the power of `ξ` in the last term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SecondLineCoefficients {
    /// `H² (K′)²`
    pub h2_dk2: f64,
    /// `(H′ − H/ξ)² (1 − K)²`
    pub dh2_1mk2: f64,
    /// `H² (1 − K)²`
    pub h2_1mk2: f64,
    /// `(K′)² (1 − K)²`
    pub dk2_1mk2: f64,
    /// `ξ^p (1 − K)⁴`
    pub xi_1mk4: f64,
    pub xi_power: f64,
}

impl Default for SecondLineCoefficients {
    fn default() -> Self {
        Self { h2_dk2: 15.0, dh2_1mk2: 10.0, h2_1mk2: 18.0, dk2_1mk2: 14.0, xi_1mk4: 64.0, xi_power: 2.0 }
    }
}

impl SecondLineCoefficients {
    pub fn all_nonnegative(&self) -> bool {
        [self.h2_dk2, self.dh2_1mk2, self.h2_1mk2, self.dk2_1mk2, self.xi_1mk4].iter().all(|&c| c >= 0.0)
    }
}

/// Point values of the profile and its first derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<T> {
    pub k: T,
    pub dk: T,
    pub h: T,
    pub dh: T,
}

impl<T: Copy> Jet<T> {
    pub fn to_array(self) -> [T; 4] {
        [self.k, self.dk, self.h, self.dh]
    }

    pub fn from_array(a: [T; 4]) -> Self {
        Self { k: a[0], dk: a[1], h: a[2], dh: a[3] }
    }
}

/// `(K′)² + ½(H′ − H/ξ)² + (K² − 1)²/(2ξ²) + K²H²/ξ²`.
pub fn first_line<T: Real>(xi: f64, y: Jet<T>) -> T {
    let inv = 1.0 / xi;
    let s = y.dh - y.h * inv;
    let k2 = y.k * y.k;
    let w = k2 - T::from(1.0);
    y.dk * y.dk + s * s * 0.5 + w * w * (0.5 * inv * inv) + k2 * y.h * y.h * (inv * inv)
}

/// Residual-interaction integrand, before the `ε` factor.
pub fn second_line<T: Real>(xi: f64, y: Jet<T>, c: &SecondLineCoefficients) -> T {
    let s = y.dh - y.h * (1.0 / xi);
    let m = T::from(1.0) - y.k;
    let m2 = m * m;
    let h2 = y.h * y.h;
    let dk2 = y.dk * y.dk;
    h2 * dk2 * c.h2_dk2
        + s * s * m2 * c.dh2_1mk2
        + h2 * m2 * c.h2_1mk2
        + dk2 * m2 * c.dk2_1mk2
        + m2 * m2 * (c.xi_1mk4 * xi.powf(c.xi_power))
}

/// `first_line + ε second_line`.
pub fn full_density<T: Real>(xi: f64, y: Jet<T>, c: &SecondLineCoefficients, epsilon: f64) -> T {
    first_line(xi, y) + second_line(xi, y, c) * epsilon
}

/// Gradient of `f` with respect to `(K, K′, H, H′)`.
pub fn gradient(f: impl Fn(Jet<HyperDual>) -> HyperDual, y: Jet<f64>) -> [f64; 4] {
    let base = y.to_array();
    std::array::from_fn(|i| {
        let z = std::array::from_fn(|j| HyperDual { re: base[j], e1: if i == j { 1.0 } else { 0.0 }, e2: 0.0, e12: 0.0 });
        f(Jet::from_array(z)).e1
    })
}

/// Gradient and Hessian of `f` with respect to `(K, K′, H, H′)`.
pub fn gradient_hessian(f: impl Fn(Jet<HyperDual>) -> HyperDual, y: Jet<f64>) -> ([f64; 4], [[f64; 4]; 4]) {
    let base = y.to_array();
    let mut g = [0.0; 4];
    let mut hess = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            let z = std::array::from_fn(|k| HyperDual {
                re: base[k],
                e1: if k == i { 1.0 } else { 0.0 },
                e2: if k == j { 1.0 } else { 0.0 },
                e12: 0.0,
            });
            let v = f(Jet::from_array(z));
            if i == j {
                g[i] = v.e1;
            }
            hess[i][j] = v.e12;
            hess[j][i] = v.e12;
        }
    }
    (g, hess)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jet(k: f64, dk: f64, h: f64, dh: f64) -> Jet<f64> {
        Jet { k, dk, h, dh }
    }

    #[test]
    fn hyper_dual_matches_central_differences() {
        let c = SecondLineCoefficients::default();
        let xi = 1.7;
        let y = jet(0.4, -0.3, 1.1, 0.8);
        let f = |z: Jet<HyperDual>| full_density(xi, z, &c, 0.02);
        let (g, hess) = gradient_hessian(f, y);
        let fv = |a: [f64; 4]| full_density(xi, Jet::from_array(a), &c, 0.02);
        let t = 1e-4;
        for i in 0..4 {
            let mut p = y.to_array();
            let mut m = y.to_array();
            p[i] += t;
            m[i] -= t;
            let fd = (fv(p) - fv(m)) / (2.0 * t);
            assert!((fd - g[i]).abs() < 1e-6 * (1.0 + g[i].abs()), "{i}: {fd} vs {}", g[i]);
            for j in 0..4 {
                let mut pp = p;
                let mut mp = m;
                pp[j] += t;
                mp[j] += t;
                let mut pm = p;
                let mut mm = m;
                pm[j] -= t;
                mm[j] -= t;
                let fd2 = (fv(pp) - fv(pm) - fv(mp) + fv(mm)) / (4.0 * t * t);
                assert!((fd2 - hess[i][j]).abs() < 1e-5 * (1.0 + hess[i][j].abs()));
            }
        }
        assert_eq!(gradient(f, y), g);
    }

    #[test]
    fn vacuum_and_positivity() {
        assert_eq!(first_line(0.3, jet(1.0, 0.0, 0.0, 0.0)), 0.0);
        let c = SecondLineCoefficients::default();
        assert_eq!(second_line(0.3, jet(1.0, 0.0, 0.0, 0.0), &c), 0.0);
        assert!(second_line(2.0, jet(-0.5, 3.0, -2.0, 0.1), &c) > 0.0);
        assert!(first_line(2.0, jet(-0.5, 3.0, -2.0, 0.1)) > 0.0);
    }

    #[test]
    fn bogomolnyi_completion() {
        // f₁ = (K′ + KH/ξ)² + ½(H′ − H/ξ + (K² − 1)/ξ)² − d/dξ[H (K² − 1)/ξ].
        let (xi, k, dk, h, dh): (f64, f64, f64, f64, f64) = (1.3, 0.6, -0.2, 0.9, 0.7);
        let sq = (dk + k * h / xi).powi(2) + 0.5 * (dh - h / xi + (k * k - 1.0) / xi).powi(2);
        let total = dh * (k * k - 1.0) / xi + 2.0 * h * k * dk / xi - h * (k * k - 1.0) / (xi * xi);
        assert!((first_line(xi, jet(k, dk, h, dh)) - (sq - total)).abs() < 1e-14);
    }
}
