//! Product quadrature on the unit sphere: Gauss-Legendre in `cos θ`, uniform in `φ`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on `[-1, 1]`, nodes in increasing order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = (n + 1) / 2;
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Tensor-product quadrature grid on S².
///
/// Node `k = i * n_phi + j` sits at `(θ_i, φ_j)` with `cos θ_i` a Gauss-Legendre
/// node and `φ_j = 2π j / n_phi`. No node lies on a pole.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    n_theta: usize,
    n_phi: usize,
    cos_theta: Vec<f64>,
    sin_theta: Vec<f64>,
    ring_weights: Vec<f64>,
    phi: Vec<f64>,
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_theta == 0 || n_phi == 0 {
            return Err(Error::InvalidArgument(format!(
                "grid needs n_theta, n_phi >= 1 (got {n_theta}, {n_phi})"
            )));
        }
        let (x, w) = gauss_legendre(n_theta);
        let sin_theta = x.iter().map(|&c| (1.0 - c * c).sqrt()).collect();
        let dphi = 2.0 * PI / n_phi as f64;
        let ring_weights = w.iter().map(|&wi| wi * dphi).collect();
        let phi = (0..n_phi).map(|j| j as f64 * dphi).collect();
        Ok(Self {
            n_theta,
            n_phi,
            cos_theta: x,
            sin_theta,
            ring_weights,
            phi,
        })
    }

    /// Smallest grid integrating every band-limited function of total degree
    /// `degree` exactly.
    pub fn for_degree(degree: usize) -> Self {
        Self::new(degree / 2 + 1, degree + 1).expect("positive sizes")
    }

    /// Grid for fields of band limit `l_max` that resolves triple products
    /// (total degree `3 l_max`).
    pub fn make(l_max: usize) -> Result<Self> {
        if l_max == 0 {
            return Err(Error::InvalidArgument("make_grid requires l_max >= 1".into()));
        }
        Ok(Self::for_degree(3 * l_max))
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Highest total harmonic degree integrated exactly.
    pub fn degree(&self) -> usize {
        (2 * self.n_theta - 1).min(self.n_phi - 1)
    }

    pub fn cos_theta(&self) -> &[f64] {
        &self.cos_theta
    }

    pub fn sin_theta(&self) -> &[f64] {
        &self.sin_theta
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    /// Weight of every node on ring `i`.
    pub fn ring_weight(&self, i: usize) -> f64 {
        self.ring_weights[i]
    }

    /// `(θ, φ)` of every node in storage order.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.n_theta {
            let theta = self.cos_theta[i].acos();
            for j in 0..self.n_phi {
                out.push((theta, self.phi[j]));
            }
        }
        out
    }

    pub fn weights(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.n_theta {
            out.extend(std::iter::repeat(self.ring_weights[i]).take(self.n_phi));
        }
        out
    }

    /// Quadrature sum in fixed storage order.
    pub fn integrate_values(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: values.len(),
            });
        }
        let mut total = 0.0;
        for i in 0..self.n_theta {
            let row = &values[i * self.n_phi..(i + 1) * self.n_phi];
            let ring: f64 = row.iter().sum();
            total += self.ring_weights[i] * ring;
        }
        Ok(total)
    }

    pub(crate) fn require_degree(&self, required: usize) -> Result<()> {
        if self.degree() < required {
            return Err(Error::GridTooCoarse {
                grid_degree: self.degree(),
                required,
            });
        }
        Ok(())
    }
}
