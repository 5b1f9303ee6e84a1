//! First-order response `(K₁, H₁)` to the residual-interaction line.
//!
//! The functional is discretized with the midpoint rule on each interval,
//! values averaged and derivatives differenced, so its exact gradient and
//! Hessian with respect to the nodal values are banded. The discrete
//! Euler-Lagrange equations linearized about BPS read
//! `Hess F₁ · y₁ = −∇F₂` at interior nodes.

use serde::Serialize;

use super::density::{first_line, gradient, gradient_hessian, second_line, Jet, SecondLineCoefficients};
use super::{MonopoleProfile, RadialGrid};
use crate::error::{Error, Result};
use crate::stats::{linear_fit, power_law_fit, LinearFit};

/// Origin exponents of `K₁`, `H₁` are fitted on this `ξ` window.
pub const ORIGIN_FIT_WINDOW: (f64, f64) = (0.02, 0.2);
/// The decay rate of `K₁` is fitted on `[Ξ − 10, Ξ − 2]`.
pub const TAIL_FIT_OFFSETS: (f64, f64) = (10.0, 2.0);
pub const ORIGIN_EXPONENT: f64 = 2.0;
pub const ORIGIN_EXPONENT_TOL: f64 = 0.1;
pub const TAIL_SLOPE: f64 = -1.0;
pub const TAIL_SLOPE_TOL: f64 = 0.05;

/// Row-major band storage with `kl` extra superdiagonals for pivoting fill-in.
struct Banded {
    n: usize,
    kl: usize,
    ku: usize,
    a: Vec<f64>,
}

impl Banded {
    fn new(n: usize, kl: usize, ku: usize) -> Self {
        Self { n, kl, ku, a: vec![0.0; n * (2 * kl + ku + 1)] }
    }

    fn width(&self) -> usize {
        2 * self.kl + self.ku + 1
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.kl + self.ku);
        i * self.width() + j + self.kl - i
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        self.a[self.idx(i, j)]
    }

    fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.a[k] += v;
    }

    fn clear_row(&mut self, i: usize) {
        let w = self.width();
        self.a[i * w..(i + 1) * w].fill(0.0);
    }

    fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.kl)..(i + self.ku + 1).min(self.n)
    }

    fn mul(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.row_range(i).map(|j| self.get(i, j) * x[j]).sum()).collect()
    }

    /// Gaussian elimination with partial pivoting; returns the solution and
    /// the smallest and largest pivot magnitudes.
    fn solve(mut self, mut b: Vec<f64>) -> Result<(Vec<f64>, f64, f64)> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let (mut pmin, mut pmax) = (f64::INFINITY, 0.0f64);
        for k in 0..n {
            let last = (k + kl + 1).min(n);
            let p = (k..last).max_by(|&i, &j| self.get(i, k).abs().total_cmp(&self.get(j, k).abs())).unwrap();
            let cols = k..(k + kl + ku + 1).min(n);
            if p != k {
                for j in cols.clone() {
                    let (ik, ip) = (self.idx(k, j), self.idx(p, j));
                    self.a.swap(ik, ip);
                }
                b.swap(k, p);
            }
            let piv = self.get(k, k);
            if piv == 0.0 || !piv.is_finite() {
                return Err(Error::Solver(format!("zero or non-finite pivot at unknown {k} of {n}")));
            }
            pmin = pmin.min(piv.abs());
            pmax = pmax.max(piv.abs());
            for i in k + 1..last {
                let f = self.get(i, k) / piv;
                if f == 0.0 {
                    continue;
                }
                for j in cols.clone() {
                    let v = self.get(k, j);
                    self.add(i, j, -f * v);
                }
                b[i] -= f * b[k];
            }
        }
        let mut x = vec![0.0; n];
        for k in (0..n).rev() {
            let s: f64 = (k + 1..(k + kl + ku + 1).min(n)).map(|j| self.get(k, j) * x[j]).sum();
            x[k] = (b[k] - s) / self.get(k, k);
        }
        Ok((x, pmin, pmax))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Perturbation {
    pub grid: RadialGrid,
    pub k1: Vec<f64>,
    pub h1: Vec<f64>,
    /// `(evb)⁴/30`; `(K₁, H₁)` are the coefficients of `ε` and do not depend on it.
    pub epsilon: f64,
    pub min_pivot: f64,
    pub max_pivot: f64,
    /// Interior residual of the linearized operator on the dilatation mode
    /// `(ξK₀′, ξH₀′)`, relative to the size of its terms.
    pub dilatation_interior_residual: f64,
    /// `H₁′(Ξ)` of the dilatation mode; nonzero means `H₁′(Ξ) = 0` excludes it.
    pub dilatation_boundary_slope: f64,
}

/// `(K_m, K′_m, H_m, H′_m)` on interval `i` as a linear map of
/// `(K_i, H_i, K_{i+1}, H_{i+1})`.
fn midpoint_map(h: f64) -> [[f64; 4]; 4] {
    [[0.5, 0.0, 0.5, 0.0], [-1.0 / h, 0.0, 1.0 / h, 0.0], [0.0, 0.5, 0.0, 0.5], [0.0, -1.0 / h, 0.0, 1.0 / h]]
}

fn midpoint_jet(p: &MonopoleProfile, i: usize, h: f64) -> Jet<f64> {
    Jet {
        k: 0.5 * (p.k[i] + p.k[i + 1]),
        dk: (p.k[i + 1] - p.k[i]) / h,
        h: 0.5 * (p.h[i] + p.h[i + 1]),
        dh: (p.h[i + 1] - p.h[i]) / h,
    }
}

/// Hessian of the midpoint first line at `base` and gradient of the midpoint
/// second line, over interleaved unknowns `(K_0, H_0, K_1, H_1, …)`.
fn assemble(base: &MonopoleProfile, c: &SecondLineCoefficients) -> (Banded, Vec<f64>) {
    let xi = base.grid.xi();
    let n = xi.len();
    let mut a = Banded::new(2 * n, 3, 3);
    let mut g = vec![0.0; 2 * n];
    for i in 0..n - 1 {
        let h = xi[i + 1] - xi[i];
        let xm = 0.5 * (xi[i] + xi[i + 1]);
        let y = midpoint_jet(base, i, h);
        let (_, hess) = gradient_hessian(|z| first_line(xm, z), y);
        let grad = gradient(|z| second_line(xm, z, c), y);
        let j = midpoint_map(h);
        for r in 0..4 {
            g[2 * i + r] += h * (0..4).map(|s| j[s][r] * grad[s]).sum::<f64>();
            for q in 0..4 {
                let v: f64 = (0..4).map(|s| (0..4).map(|t| j[s][r] * hess[s][t] * j[t][q]).sum::<f64>()).sum();
                a.add(2 * i + r, 2 * i + q, h * v);
            }
        }
    }
    (a, g)
}

/// Replaces the first and last node equations with the boundary conditions
/// `K₁ = H₁ = 0` at `ξ₀` and `K₁′ + K₁ = 0`, `H₁′ = 0` at `Ξ`.
fn impose_boundary(a: &mut Banded, rhs: &mut [f64], xi: &[f64]) {
    let n = xi.len();
    let (k0, h0, kn, hn) = (0, 1, 2 * (n - 1), 2 * (n - 1) + 1);
    let h = xi[n - 1] - xi[n - 2];
    for r in [k0, h0, kn, hn] {
        a.clear_row(r);
        rhs[r] = 0.0;
    }
    a.add(k0, k0, 1.0);
    a.add(h0, h0, 1.0);
    a.add(kn, kn, 1.0 / h + 0.5);
    a.add(kn, kn - 2, -1.0 / h + 0.5);
    a.add(hn, hn, 1.0);
    a.add(hn, hn - 2, -1.0);
}

/// Solves the first-order perturbation equations about a BPS `base`.
pub fn perturbation_solve(base: &MonopoleProfile, epsilon: f64, c: &SecondLineCoefficients) -> Result<Perturbation> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!("epsilon must be non-negative, got {epsilon}")));
    }
    let xi = base.grid.xi();
    let n = xi.len();
    let (mut a, g) = assemble(base, c);
    let mut rhs: Vec<f64> = g.iter().map(|v| -v).collect();

    // Dilatation mode of the Bogomol'nyi family, before boundary rows go in.
    let dk = base.grid.derivative(&base.k);
    let dh = base.grid.derivative(&base.h);
    let mode: Vec<f64> = (0..2 * n).map(|r| xi[r / 2] * if r % 2 == 0 { dk[r / 2] } else { dh[r / 2] }).collect();
    let applied = a.mul(&mode);
    let scale = (2..2 * n - 2)
        .map(|r| a.row_range(r).map(|j| (a.get(r, j) * mode[j]).abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let dilatation_interior_residual = applied[2..2 * n - 2].iter().fold(0.0f64, |m, v| m.max(v.abs())) / scale;
    let dilatation_boundary_slope = (mode[2 * n - 1] - mode[2 * n - 3]) / (xi[n - 1] - xi[n - 2]);

    impose_boundary(&mut a, &mut rhs, xi);
    let (y, min_pivot, max_pivot) = a.solve(rhs).map_err(|e| {
        Error::Solver(format!("{e}; grid n = {n}, xi in [{}, {}], grading {}", xi[0], xi[n - 1], base.grid.spacing.beta))
    })?;
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Solver(format!("non-finite solution on grid n = {n}")));
    }
    Ok(Perturbation {
        grid: base.grid.clone(),
        k1: y.iter().step_by(2).copied().collect(),
        h1: y.iter().skip(1).step_by(2).copied().collect(),
        epsilon,
        min_pivot,
        max_pivot,
        dilatation_interior_residual,
        dilatation_boundary_slope,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Asymptotics {
    /// Log-log fits of `|K₁|` and `|H₁|` on the origin window; absent when the
    /// function changes sign there.
    pub origin_k1: Option<LinearFit>,
    pub origin_h1: Option<LinearFit>,
    /// Fit of `ln |K₁|` against `ξ` on the tail window.
    pub tail_k1: Option<LinearFit>,
    pub origin_window: (f64, f64),
    pub tail_window: (f64, f64),
    pub cutoff: f64,
}

impl Asymptotics {
    pub fn origin_passes(&self) -> bool {
        [self.origin_k1, self.origin_h1]
            .iter()
            .all(|f| f.is_some_and(|f| (f.slope - ORIGIN_EXPONENT).abs() <= ORIGIN_EXPONENT_TOL))
    }

    pub fn tail_passes(&self) -> bool {
        self.tail_k1.is_some_and(|f| (f.slope - TAIL_SLOPE).abs() <= TAIL_SLOPE_TOL)
    }
}

fn window(xi: &[f64], y: &[f64], lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    xi.iter().zip(y).filter(|(&x, _)| x >= lo && x <= hi).map(|(&x, &v)| (x, v)).unzip()
}

fn same_sign_abs(v: &[f64]) -> Option<Vec<f64>> {
    let positive = v.iter().all(|&x| x > 0.0);
    let negative = v.iter().all(|&x| x < 0.0);
    (positive || negative).then(|| v.iter().map(|x| x.abs()).collect())
}

pub fn asymptotics(p: &Perturbation) -> Asymptotics {
    let xi = p.grid.xi();
    let cutoff = p.grid.cutoff();
    let (lo, hi) = ORIGIN_FIT_WINDOW;
    let origin = |y: &[f64]| {
        let (x, v) = window(xi, y, lo, hi);
        same_sign_abs(&v).and_then(|v| power_law_fit(&x, &v))
    };
    let tail_window = ((cutoff - TAIL_FIT_OFFSETS.0).max(xi[0]), cutoff - TAIL_FIT_OFFSETS.1);
    let (x, v) = window(xi, &p.k1, tail_window.0, tail_window.1);
    let tail_k1 = same_sign_abs(&v).and_then(|v| linear_fit(&x, &v.iter().map(|a| a.ln()).collect::<Vec<_>>()));
    Asymptotics {
        origin_k1: origin(&p.k1),
        origin_h1: origin(&p.h1),
        tail_k1,
        origin_window: ORIGIN_FIT_WINDOW,
        tail_window,
        cutoff,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monopole::{bps_profiles, RadialGrid};

    #[test]
    fn banded_solver_matches_dense_elimination() {
        let n = 9;
        let mut a = Banded::new(n, 2, 1);
        let mut dense = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i.saturating_sub(2)..(i + 2).min(n) {
                // Small diagonal forces pivoting.
                let v = if i == j { 0.1 } else { 1.0 + ((i * 7 + j * 3) % 5) as f64 };
                a.add(i, j, v);
                dense[i][j] = v;
            }
        }
        let x: Vec<f64> = (0..n).map(|i| i as f64 - 3.5).collect();
        let b = a.mul(&x);
        let dense_b: Vec<f64> = dense.iter().map(|r| r.iter().zip(&x).map(|(a, x)| a * x).sum()).collect();
        assert_eq!(b, dense_b);
        let (y, pmin, _) = a.solve(b).unwrap();
        assert!(pmin > 0.0);
        for (u, v) in x.iter().zip(&y) {
            assert!((u - v).abs() < 1e-12);
        }
        let singular = Banded::new(3, 1, 1);
        assert!(singular.solve(vec![1.0; 3]).is_err());
    }

    #[test]
    fn zero_forcing_gives_zero() {
        let base = bps_profiles(&RadialGrid::new(12.0, 801).unwrap());
        let zero = SecondLineCoefficients { h2_dk2: 0.0, dh2_1mk2: 0.0, h2_1mk2: 0.0, dk2_1mk2: 0.0, xi_1mk4: 0.0, xi_power: 2.0 };
        let p = perturbation_solve(&base, 0.0, &zero).unwrap();
        assert!(p.k1.iter().chain(&p.h1).all(|&v| v == 0.0));
        assert!(perturbation_solve(&base, -1.0, &zero).is_err());
    }

    #[test]
    fn dilatation_mode_is_interior_kernel_excluded_by_boundary() {
        let base = bps_profiles(&RadialGrid::new(25.0, 4000).unwrap());
        let p = perturbation_solve(&base, 0.01, &SecondLineCoefficients::default()).unwrap();
        assert!(p.dilatation_interior_residual < 1e-3, "{}", p.dilatation_interior_residual);
        assert!((p.dilatation_boundary_slope - 1.0).abs() < 1e-6);
    }

    #[test]
    fn origin_exponents_are_two() {
        let base = bps_profiles(&RadialGrid::new(25.0, 4000).unwrap());
        let p = perturbation_solve(&base, 0.01, &SecondLineCoefficients::default()).unwrap();
        let a = asymptotics(&p);
        assert!(a.origin_passes(), "{a:?}");
    }

    #[test]
    fn discrete_equations_hold() {
        // Interior rows: Hessian times solution equals minus forcing.
        let base = bps_profiles(&RadialGrid::new(10.0, 401).unwrap());
        let c = SecondLineCoefficients::default();
        let p = perturbation_solve(&base, 0.0, &c).unwrap();
        let (a, g) = assemble(&base, &c);
        let y: Vec<f64> = p.k1.iter().zip(&p.h1).flat_map(|(k, h)| [*k, *h]).collect();
        let r = a.mul(&y);
        let scale = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 2..y.len() - 2 {
            assert!((r[i] + g[i]).abs() < 1e-9 * scale, "{i}");
        }
    }
}
