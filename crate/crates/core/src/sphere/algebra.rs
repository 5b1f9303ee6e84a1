//! Poisson bracket `{f, g} = ∂f/∂cosθ ∂g/∂φ − ∂f/∂φ ∂g/∂cosθ` and the Lie
//! algebra it generates on band-limited functions.

use std::f64::consts::SQRT_2;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use super::field::HarmonicField;
use super::grid::SphereGrid;
use super::harmonics::{lm_from_index, lm_index, n_coeffs, HarmonicTable};
use crate::error::{Error, Result};

/// Poisson bracket of two fields. The result carries band limit
/// `f.l_max + g.l_max`; callers truncate explicitly.
pub fn bracket(f: &HarmonicField, g: &HarmonicField) -> HarmonicField {
    let l_out = f.l_max() + g.l_max();
    let grid = SphereGrid::for_degree(2 * l_out);
    let table = HarmonicTable::new(&grid, l_out);
    let fs = f.synthesize_with(&grid, &table, true);
    let gs = g.synthesize_with(&grid, &table, true);
    let values: Vec<Complex64> = (0..grid.len())
        .map(|k| fs.d_dcos[k] * gs.d_dphi[k] - fs.d_dphi[k] * gs.d_dcos[k])
        .collect();
    HarmonicField::analyze_with(&values, l_out, &grid, &table)
}

/// Pointwise product, band limit `f.l_max + g.l_max`.
pub fn product(f: &HarmonicField, g: &HarmonicField) -> HarmonicField {
    let l_out = f.l_max() + g.l_max();
    let grid = SphereGrid::for_degree(2 * l_out);
    let table = HarmonicTable::new(&grid, l_out);
    let fs = f.synthesize_with(&grid, &table, false);
    let gs = g.synthesize_with(&grid, &table, false);
    let values: Vec<Complex64> = fs.value.iter().zip(&gs.value).map(|(a, b)| a * b).collect();
    HarmonicField::analyze_with(&values, l_out, &grid, &table)
}

/// `f_{(lm)(l'm')(l''m'')} = ∫ {Y_lm, Y_l'm'} conj(Y_l''m'') dΩ` for all three
/// slots within the band limit.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    l_max: usize,
    data: Vec<Complex64>,
}

impl StructureConstants {
    pub fn compute(l_max: usize) -> Result<Self> {
        let grid = SphereGrid::make(l_max)?;
        let table = HarmonicTable::new(&grid, l_max);
        let n = n_coeffs(l_max);
        let npts = grid.len();
        // Basis samples: Y, ∂_cos Y, ∂_φ Y, each [basis][node].
        let mut y = vec![vec![Complex64::new(0.0, 0.0); npts]; n];
        let mut yx = y.clone();
        let mut yp = y.clone();
        for a in 0..n {
            let (l, m) = lm_from_index(a);
            let unit = HarmonicField::mode(l, m, Complex64::new(1.0, 0.0))?.padded(l_max);
            let s = unit.synthesize_with(&grid, &table, true);
            y[a] = s.value;
            yx[a] = s.d_dcos;
            yp[a] = s.d_dphi;
        }
        let weights = grid.weights();
        let mut data = vec![Complex64::new(0.0, 0.0); n * n * n];
        let mut integrand = vec![Complex64::new(0.0, 0.0); npts];
        for a in 0..n {
            for b in 0..n {
                for k in 0..npts {
                    integrand[k] = (yx[a][k] * yp[b][k] - yp[a][k] * yx[b][k]) * weights[k];
                }
                for c in 0..n {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for k in 0..npts {
                        acc += integrand[k] * y[c][k].conj();
                    }
                    data[(a * n + b) * n + c] = acc;
                }
            }
        }
        Ok(Self { l_max, data })
    }

    pub fn l_max(&self) -> usize {
        self.l_max
    }

    pub fn get(&self, a: (usize, i64), b: (usize, i64), c: (usize, i64)) -> Complex64 {
        let n = n_coeffs(self.l_max);
        self.data[(lm_index(a.0, a.1) * n + lm_index(b.0, b.1)) * n + lm_index(c.0, c.1)]
    }

    /// Iterates `(a, b, c, value)` over flat `(l, m)` indices.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, Complex64)> + '_ {
        let n = n_coeffs(self.l_max);
        self.data.iter().enumerate().map(move |(k, &v)| (k / (n * n), (k / n) % n, k % n, v))
    }

    /// CSV `l1,m1,l2,m2,l3,m3,re,im`, entries with modulus below `1e-12` omitted.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("l1,m1,l2,m2,l3,m3,re,im\n");
        for (a, b, c, v) in self.entries() {
            if v.norm() < 1e-12 {
                continue;
            }
            let (l1, m1) = lm_from_index(a);
            let (l2, m2) = lm_from_index(b);
            let (l3, m3) = lm_from_index(c);
            writeln!(out, "{l1},{m1},{l2},{m2},{l3},{m3},{:.16e},{:.16e}", v.re, v.im).unwrap();
        }
        out
    }
}

/// Which `l = 1` basis realizes the SU(2) generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Su2Basis {
    /// `T¹ = (Y₁₁ + iY₁₋₁)/√2, T² = (Y₁₁ − iY₁₋₁)/√2, T³ = Y₁₀`.
    Printed,
    /// `T¹ = (Y₁₋₁ − Y₁₁)/√2, T² = i(Y₁₋₁ + Y₁₁)/√2, T³ = Y₁₀`.
    Standard,
}

/// Result of a closure test `{Tᵃ, Tᵇ} = c ε_abc Tᶜ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Closure {
    /// Per cyclic pair `(1,2), (2,3), (3,1)`: projection of the bracket on `Tᶜ`.
    pub pair_constants: [[f64; 2]; 3],
    /// Mean of the pair constants (complex, as `[re, im]`).
    pub constant: [f64; 2],
    /// Max coefficient deviation of `{Tᵃ,Tᵇ} − c ε_abc Tᶜ` over all ordered pairs.
    pub residual: f64,
}

impl Closure {
    /// Holds with one real constant.
    pub fn holds(&self, tol: f64) -> bool {
        self.residual < tol && self.constant[1].abs() < tol
    }
}

#[derive(Debug, Clone)]
pub struct Su2Generators {
    pub t: [HarmonicField; 3],
    pub basis: Su2Basis,
    pub closure: Closure,
    /// Closure of the printed basis, kept when the standard basis was substituted.
    pub printed_closure: Closure,
}

impl Su2Generators {
    /// Real closure constant `c` of the basis in use.
    pub fn closure_constant(&self) -> f64 {
        self.closure.constant[0]
    }
}

pub const SU2_CLOSURE_TOL: f64 = 1e-10;

fn l1_basis(basis: Su2Basis) -> [HarmonicField; 3] {
    let r = 1.0 / SQRT_2;
    let mut t1 = HarmonicField::zeros(1);
    let mut t2 = HarmonicField::zeros(1);
    let mut t3 = HarmonicField::zeros(1);
    match basis {
        Su2Basis::Printed => {
            t1.set(1, 1, Complex64::new(r, 0.0)).unwrap();
            t1.set(1, -1, Complex64::new(0.0, r)).unwrap();
            t2.set(1, 1, Complex64::new(r, 0.0)).unwrap();
            t2.set(1, -1, Complex64::new(0.0, -r)).unwrap();
        }
        Su2Basis::Standard => {
            t1.set(1, -1, Complex64::new(r, 0.0)).unwrap();
            t1.set(1, 1, Complex64::new(-r, 0.0)).unwrap();
            t2.set(1, -1, Complex64::new(0.0, r)).unwrap();
            t2.set(1, 1, Complex64::new(0.0, r)).unwrap();
        }
    }
    t3.set(1, 0, Complex64::new(1.0, 0.0)).unwrap();
    [t1, t2, t3]
}

/// Measures `{Tᵃ,Tᵇ} = c ε_abc Tᶜ` for an arbitrary triple.
pub fn closure_of(t: &[HarmonicField; 3]) -> Closure {
    let cyc = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];
    let mut pair_constants = [[0.0; 2]; 3];
    let mut mean = Complex64::new(0.0, 0.0);
    for (k, &(a, b, c)) in cyc.iter().enumerate() {
        let br = bracket(&t[a], &t[b]);
        let tc = &t[c];
        let cst = br.inner(tc) / tc.inner(tc);
        pair_constants[k] = [cst.re, cst.im];
        mean += cst / 3.0;
    }
    let mut residual: f64 = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            let br = bracket(&t[a], &t[b]);
            let expected = match (a, b) {
                (0, 1) => t[2].scale(mean),
                (1, 2) => t[0].scale(mean),
                (2, 0) => t[1].scale(mean),
                (1, 0) => t[2].scale(-mean),
                (2, 1) => t[0].scale(-mean),
                (0, 2) => t[1].scale(-mean),
                _ => HarmonicField::zeros(1),
            };
            residual = residual.max((&br - &expected).max_abs());
        }
    }
    Closure {
        pair_constants,
        constant: [mean.re, mean.im],
        residual,
    }
}

/// SU(2) generators from the `l = 1` harmonics. The printed combinations are
/// tried first; when they do not close with a single real constant, the
/// standard real combinations are returned and `basis` says so.
pub fn su2_generators() -> Su2Generators {
    let printed = l1_basis(Su2Basis::Printed);
    let printed_closure = closure_of(&printed);
    if printed_closure.holds(SU2_CLOSURE_TOL) {
        return Su2Generators {
            t: printed,
            basis: Su2Basis::Printed,
            closure: printed_closure,
            printed_closure,
        };
    }
    let standard = l1_basis(Su2Basis::Standard);
    let closure = closure_of(&standard);
    Su2Generators {
        t: standard,
        basis: Su2Basis::Standard,
        closure,
        printed_closure,
    }
}

/// Checks that `f` and `g` have the same band limit.
pub fn require_same_band(f: &HarmonicField, g: &HarmonicField) -> Result<()> {
    if f.l_max() != g.l_max() {
        return Err(Error::BandLimitMismatch(f.l_max(), g.l_max()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    fn unit(l: usize, m: i64) -> HarmonicField {
        HarmonicField::mode(l, m, Complex64::new(1.0, 0.0)).unwrap()
    }

    #[test]
    fn bracket_with_itself_vanishes_exactly() {
        let mut f = HarmonicField::zeros(3);
        f.set(2, 1, Complex64::new(0.3, 0.2)).unwrap();
        f.set(3, -2, Complex64::new(-0.1, 0.7)).unwrap();
        let b = bracket(&f, &f);
        assert_eq!(b.nonzero().count(), 0);
    }

    #[test]
    fn cos_theta_generates_rotations() {
        // {Y10, Y11} = sqrt(3/4π) ∂_φ Y11 = i sqrt(3/4π) Y11.
        let b = bracket(&unit(1, 0), &unit(1, 1));
        let expect = unit(1, 1).scale(Complex64::new(0.0, (3.0 / (4.0 * PI)).sqrt()));
        assert!((&b - &expect).max_abs() < 1e-14);
    }

    #[test]
    fn constants_are_central() {
        let mut g = HarmonicField::zeros(3);
        g.set(3, 2, Complex64::new(1.0, -1.0)).unwrap();
        let b = bracket(&unit(0, 0), &g);
        assert!(b.max_abs() < 1e-15);
    }

    #[test]
    fn printed_basis_fails_and_standard_closes() {
        let su2 = su2_generators();
        assert_eq!(su2.basis, Su2Basis::Standard);
        assert!(!su2.printed_closure.holds(SU2_CLOSURE_TOL));
        assert!(su2.closure.holds(SU2_CLOSURE_TOL), "{:?}", su2.closure);
        let c = su2.closure_constant();
        assert!((c + (3.0 / (4.0 * PI)).sqrt()).abs() < 1e-12, "c = {c}");
        for t in &su2.t {
            for (l, _, _) in t.nonzero() {
                assert_eq!(l, 1);
            }
            assert!(t.is_real(1e-15));
        }
    }

    #[test]
    fn structure_constants_are_antisymmetric_and_blind_to_constants() {
        let sc = StructureConstants::compute(2).unwrap();
        for (a, b, c, v) in sc.entries() {
            let n = n_coeffs(2);
            let swapped = sc.data[(b * n + a) * n + c];
            assert_eq!(v, -swapped);
            if a == 0 || b == 0 || c == 0 {
                assert!(v.norm() < 1e-13, "{a} {b} {c} {v}");
            }
        }
        let csv = sc.to_csv();
        for line in csv.lines().skip(1) {
            let cols: Vec<i64> = line.split(',').take(6).map(|x| x.parse().unwrap()).collect();
            assert!(cols[0] != 0 && cols[2] != 0 && cols[4] != 0, "{line}");
        }
    }
}
