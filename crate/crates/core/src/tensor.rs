//! Brute-force flat-index tensor kernels in `n ≤ 8` dimensions.
//!
//! Generalized Kronecker deltas are evaluated as literal signed permutation
//! sums and Levi-Civita objects are symbols (entries −1, 0, 1). Metric density
//! factors appear explicitly where they are needed. Everything here is meant to
//! be dumb enough to serve as an oracle for the reduction module.

use rand::Rng;
use serde::Serialize;
use twofloat::TwoFloat;

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 8;

/// `quartic delta contraction / quartic trace form`, any `n ≥ 4`.
pub const KAPPA: f64 = 8.0;
/// `(ε F v)² / |g|` over the cubic delta contraction, `n = 3`, Euclidean metric.
pub const EPS3_CONSTANT: f64 = 1.0;
/// `(ε F F)² / |g|` over the quartic trace form, `n = 4`, Euclidean metric.
pub const EPS4_CONSTANT: f64 = 8.0;

const ANTISYMMETRY_TOL: f64 = 1e-12;

fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::InvalidArgument(format!("dimension {n} outside 1..={MAX_DIM}")));
    }
    Ok(())
}

/// Rank-2 covariant tensor `F_AB`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatTensor2 {
    n: usize,
    entries: Vec<f64>,
}

/// Covariant vector `v_A`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatVector {
    n: usize,
    entries: Vec<f64>,
}

/// Diagonal metric `g_AB = diag(d_A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatMetric {
    n: usize,
    diag: Vec<f64>,
}

impl FlatTensor2 {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        check_dim(n)?;
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: entries.len() });
        }
        Ok(Self { n, entries })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(n, vec![0.0; n * n])
    }

    /// Antisymmetric tensor from its upper triangle `(a, b, value)` with `a < b`.
    pub fn antisymmetric(n: usize, upper: &[(usize, usize, f64)]) -> Result<Self> {
        let mut t = Self::zeros(n)?;
        for &(a, b, v) in upper {
            if a >= n || b >= n {
                return Err(Error::IndexOutOfRange { index: a.max(b), dim: n });
            }
            t.entries[a * n + b] = v;
            t.entries[b * n + a] = -v;
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.entries[a * self.n + b]
    }

    pub fn set(&mut self, a: usize, b: usize, v: f64) {
        self.entries[a * self.n + b] = v;
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// `max |F_AB + F_BA|`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in a..n {
                worst = worst.max((self.get(a, b) + self.get(b, a)).abs());
            }
        }
        worst
    }

    fn require_antisymmetric(&self) -> Result<()> {
        let scale = self.entries.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        let r = self.antisymmetry_residual();
        if r > ANTISYMMETRY_TOL * scale {
            return Err(Error::NotAntisymmetric(r));
        }
        Ok(())
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|v| v * s).collect() }
    }

    /// `F'_{ab} = F_{p[a] p[b]}`.
    pub fn permuted(&self, p: &[usize]) -> Self {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                out[a * n + b] = self.get(p[a], p[b]);
            }
        }
        Self { n, entries: out }
    }
}

impl FlatVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        check_dim(entries.len())?;
        Ok(Self { n: entries.len(), entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize) -> f64 {
        self.entries[a]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn permuted(&self, p: &[usize]) -> Self {
        Self { n: self.n, entries: p.iter().map(|&i| self.entries[i]).collect() }
    }
}

impl FlatMetric {
    pub fn new(diag: Vec<f64>) -> Result<Self> {
        check_dim(diag.len())?;
        if let Some(i) = diag.iter().position(|&d| d == 0.0 || !d.is_finite()) {
            return Err(Error::InvalidArgument(format!("metric entry {i} is zero or non-finite")));
        }
        Ok(Self { n: diag.len(), diag })
    }

    pub fn euclidean(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    /// `diag(-1, 1, …, 1)`.
    pub fn minkowski(n: usize) -> Result<Self> {
        let mut d = vec![1.0; n];
        d[0] = -1.0;
        Self::new(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    #[inline]
    pub fn inv(&self, a: usize) -> f64 {
        1.0 / self.diag[a]
    }

    pub fn det(&self) -> f64 {
        self.diag.iter().product()
    }

    pub fn permuted(&self, p: &[usize]) -> Self {
        Self { n: self.n, diag: p.iter().map(|&i| self.diag[i]).collect() }
    }
}

fn check_same(n: usize, m: usize) -> Result<()> {
    if n != m {
        return Err(Error::DimensionMismatch { expected: n, got: m });
    }
    Ok(())
}

/// All permutations of `0..k` with their signs, in lexicographic order.
pub fn signed_permutations(k: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, k: usize, out: &mut Vec<(Vec<usize>, f64)>) {
        if prefix.len() == k {
            out.push((prefix.clone(), permutation_sign(prefix)));
            return;
        }
        for i in 0..k {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, k, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(k), &mut vec![false; k], k, &mut out);
    out
}

/// Sign of a permutation by counting inversions; 0 if an entry repeats.
pub fn permutation_sign(p: &[usize]) -> f64 {
    let mut s = 1.0;
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            if p[i] == p[j] {
                return 0.0;
            }
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

// Contractions below run in double-double arithmetic: their terms cancel
// strongly on some inputs, and the identity ratios must hold to 1e-10 there too.

/// `g^{AA}` to double-double precision.
fn inv_dd(g: &FlatMetric, a: usize) -> TwoFloat {
    TwoFloat::from(1.0) / g.diag[a]
}

fn abs_det_dd(g: &FlatMetric) -> TwoFloat {
    g.diag.iter().fold(TwoFloat::from(1.0), |acc, &d| acc * d.abs())
}

/// `F^{AB} = g^{AA} g^{BB} F_AB`, row-major.
fn raise2(f: &FlatTensor2, g: &FlatMetric) -> Vec<TwoFloat> {
    let n = f.n;
    let inv: Vec<TwoFloat> = (0..n).map(|a| inv_dd(g, a)).collect();
    let mut out = vec![TwoFloat::default(); n * n];
    for a in 0..n {
        for b in 0..n {
            out[a * n + b] = inv[a] * inv[b] * f.get(a, b);
        }
    }
    out
}

/// `δ^{ABC}_{DEF} F^{DE} F_AB ∂^Fφ ∂_Cφ` by the 3!-term permutation sum.
pub fn gen_delta_contract_3(f: &FlatTensor2, v: &FlatVector, g: &FlatMetric) -> Result<f64> {
    check_same(f.n, v.n)?;
    check_same(f.n, g.n)?;
    f.require_antisymmetric()?;
    let n = f.n;
    let fu = raise2(f, g);
    let vu: Vec<TwoFloat> = (0..n).map(|a| inv_dd(g, a) * v.get(a)).collect();
    let perms = signed_permutations(3);
    let mut total = TwoFloat::default();
    for a in 0..n {
        for b in 0..n {
            let fab = f.get(a, b);
            if fab == 0.0 {
                continue;
            }
            for c in 0..n {
                // Repeated indices cancel pairwise in the antisymmetrized sum.
                if c == a || c == b {
                    continue;
                }
                let idx = [a, b, c];
                let mut delta_x = TwoFloat::default();
                for (p, sgn) in &perms {
                    // δ^{ABC}_{DEF} X^{DEF} = Σ_p sgn(p) X^{idx∘p⁻¹}; the set of
                    // relabelings is the same, so X[p[i]] = idx[i] enumerates it.
                    let mut x = [0usize; 3];
                    for i in 0..3 {
                        x[p[i]] = idx[i];
                    }
                    delta_x += fu[x[0] * n + x[1]] * vu[x[2]] * *sgn;
                }
                total += delta_x * fab * v.get(c);
            }
        }
    }
    Ok(total.into())
}

/// `2(F_AB F^AB ∂^Cφ ∂_Cφ − 2 F^{AC} F_AB ∂^Bφ ∂_Cφ)`.
pub fn expanded_scalar_form(f: &FlatTensor2, v: &FlatVector, g: &FlatMetric) -> Result<f64> {
    check_same(f.n, v.n)?;
    check_same(f.n, g.n)?;
    f.require_antisymmetric()?;
    Ok(expanded_scalar_parts(f, v, g).0)
}

/// Value and the sum of absolute term magnitudes (for relative errors).
fn expanded_scalar_parts(f: &FlatTensor2, v: &FlatVector, g: &FlatMetric) -> (f64, f64) {
    let n = f.n;
    let (mut ff, mut ffa) = (0.0, 0.0);
    for a in 0..n {
        for b in 0..n {
            let t = g.inv(a) * g.inv(b) * f.get(a, b) * f.get(a, b);
            ff += t;
            ffa += t.abs();
        }
    }
    let (mut vv, mut vva) = (0.0, 0.0);
    for c in 0..n {
        let t = g.inv(c) * v.get(c) * v.get(c);
        vv += t;
        vva += t.abs();
    }
    let (mut cross, mut crossa) = (0.0, 0.0);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let t = g.inv(a) * g.inv(c) * f.get(a, c) * f.get(a, b) * g.inv(b) * v.get(b) * v.get(c);
                cross += t;
                crossa += t.abs();
            }
        }
    }
    (2.0 * (ff * vv - 2.0 * cross), 2.0 * (ffa * vva + 2.0 * crossa))
}

/// `δ^{ABCD}_{EFGH} F^{EF} F_AB F^{GH} F_CD` by the 4!-term permutation sum.
pub fn gen_delta_contract_4(f: &FlatTensor2, g: &FlatMetric) -> Result<f64> {
    check_same(f.n, g.n)?;
    f.require_antisymmetric()?;
    let n = f.n;
    let fu = raise2(f, g);
    let perms = signed_permutations(4);
    let mut total = TwoFloat::default();
    for a in 0..n {
        for b in 0..n {
            let fab = f.get(a, b);
            if fab == 0.0 {
                continue;
            }
            for c in 0..n {
                for d in 0..n {
                    let fcd = f.get(c, d);
                    if fcd == 0.0 {
                        continue;
                    }
                    // Repeated indices cancel pairwise in the antisymmetrized sum.
                    if c == a || c == b || d == a || d == b {
                        continue;
                    }
                    let idx = [a, b, c, d];
                    let mut delta_y = TwoFloat::default();
                    for (p, sgn) in &perms {
                        let mut x = [0usize; 4];
                        for i in 0..4 {
                            x[p[i]] = idx[i];
                        }
                        delta_y += fu[x[0] * n + x[1]] * fu[x[2] * n + x[3]] * *sgn;
                    }
                    total += delta_y * fab * fcd;
                }
            }
        }
    }
    Ok(total.into())
}

fn matmul(a: &[TwoFloat], b: &[TwoFloat], n: usize) -> Vec<TwoFloat> {
    let mut c = vec![TwoFloat::default(); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}

fn trace(a: &[TwoFloat], n: usize) -> TwoFloat {
    (0..n).fold(TwoFloat::default(), |acc, i| acc + a[i * n + i])
}

/// `(F_AB F^AB)² − 2 F^A_B F^B_C F^C_D F^D_A`.
pub fn trace_form_quartic(f: &FlatTensor2, g: &FlatMetric) -> Result<f64> {
    check_same(f.n, g.n)?;
    f.require_antisymmetric()?;
    let n = f.n;
    // Mixed tensor M^A_B = g^{AA} F_AB.
    let mut m = vec![TwoFloat::default(); n * n];
    for a in 0..n {
        let inv = inv_dd(g, a);
        for b in 0..n {
            m[a * n + b] = inv * f.get(a, b);
        }
    }
    let m2 = matmul(&m, &m, n);
    let m4 = matmul(&m2, &m2, n);
    // F_AB F^AB = −tr M².
    let ff = -trace(&m2, n);
    Ok((ff * ff - trace(&m4, n) * 2.0).into())
}

/// `(ε^{ABC} F_AB v_C)² / |det g|` with `ε` the Levi-Civita symbol; `n = 3`.
pub fn eps_square_scalar_3d(f: &FlatTensor2, v: &FlatVector, g: &FlatMetric) -> Result<f64> {
    if f.n != 3 {
        return Err(Error::DimensionMismatch { expected: 3, got: f.n });
    }
    check_same(3, v.n)?;
    check_same(3, g.n)?;
    f.require_antisymmetric()?;
    let mut s = TwoFloat::default();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let e = permutation_sign(&[a, b, c]);
                if e != 0.0 {
                    s += TwoFloat::new_mul(f.get(a, b), v.get(c)) * e;
                }
            }
        }
    }
    Ok((s * s / abs_det_dd(g)).into())
}

fn eps_contract_4d_dd(f: &FlatTensor2) -> TwoFloat {
    let mut s = TwoFloat::default();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let e = permutation_sign(&[a, b, c, d]);
                    if e != 0.0 {
                        s += TwoFloat::new_mul(f.get(a, b), f.get(c, d)) * e;
                    }
                }
            }
        }
    }
    s
}

/// `ε^{ABCD} F_AB F_CD` with the Levi-Civita symbol; `n = 4`.
pub fn eps_contract_4d(f: &FlatTensor2) -> Result<f64> {
    if f.n != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: f.n });
    }
    Ok(eps_contract_4d_dd(f).into())
}

/// `(ε^{ABCD} F_AB F_CD)² / |det g|`; `n = 4`.
pub fn eps_square_ym_4d(f: &FlatTensor2, g: &FlatMetric) -> Result<f64> {
    if f.n != 4 {
        return Err(Error::DimensionMismatch { expected: 4, got: f.n });
    }
    check_same(4, g.n)?;
    f.require_antisymmetric()?;
    let s = eps_contract_4d_dd(f);
    Ok((s * s / abs_det_dd(g)).into())
}

/// Determinant by LU decomposition with partial pivoting.
pub fn determinant(a: &[f64], n: usize) -> f64 {
    let mut m = a.to_vec();
    let mut det = 1.0;
    for k in 0..n {
        let mut piv = k;
        for i in (k + 1)..n {
            if m[i * n + k].abs() > m[piv * n + k].abs() {
                piv = i;
            }
        }
        if m[piv * n + k] == 0.0 {
            return 0.0;
        }
        if piv != k {
            for j in 0..n {
                m.swap(k * n + j, piv * n + j);
            }
            det = -det;
        }
        let p = m[k * n + k];
        det *= p;
        for i in (k + 1)..n {
            let factor = m[i * n + k] / p;
            if factor != 0.0 {
                for j in k..n {
                    m[i * n + j] -= factor * m[k * n + j];
                }
            }
        }
    }
    det
}

/// `det(g + α F)`.
pub fn shifted_determinant(f: &FlatTensor2, g: &FlatMetric, alpha: f64) -> Result<f64> {
    check_same(f.n, g.n)?;
    let n = f.n;
    let mut m = f.entries.iter().map(|v| alpha * v).collect::<Vec<_>>();
    for a in 0..n {
        m[a * n + a] += g.diag[a];
    }
    Ok(determinant(&m, n))
}

/// `(C/α²)[√(−det(g + αF)) − √(−det g)]`.
pub fn born_infeld_density(f: &FlatTensor2, g: &FlatMetric, alpha: f64, c: f64) -> Result<f64> {
    check_same(f.n, g.n)?;
    f.require_antisymmetric()?;
    if alpha == 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidArgument("alpha must be finite and nonzero".into()));
    }
    let dg = g.det();
    if dg >= 0.0 {
        return Err(Error::NotLorentzian(format!("det g = {dg:e}")));
    }
    let ds = shifted_determinant(f, g, alpha)?;
    if ds > 0.0 {
        return Err(Error::NotLorentzian(format!("det(g + αF) = {ds:e}")));
    }
    Ok(c / (alpha * alpha) * ((-ds).sqrt() - (-dg).sqrt()))
}

/// Small-`α` limit of [`born_infeld_density`]: `(C/4) √(−det g) F_AB F^AB`.
pub fn born_infeld_leading(f: &FlatTensor2, g: &FlatMetric, c: f64) -> Result<f64> {
    check_same(f.n, g.n)?;
    let n = f.n;
    let mut ff = 0.0;
    for a in 0..n {
        for b in 0..n {
            ff += g.inv(a) * g.inv(b) * f.get(a, b) * f.get(a, b);
        }
    }
    Ok(0.25 * c * g.det().abs().sqrt() * ff)
}

/// Antisymmetric tensor with upper-triangle entries uniform in `[-1, 1]`.
pub fn random_antisymmetric<R: Rng>(rng: &mut R, n: usize) -> FlatTensor2 {
    let mut t = FlatTensor2::zeros(n).expect("valid dimension");
    for a in 0..n {
        for b in (a + 1)..n {
            let v = rng.gen_range(-1.0..=1.0);
            t.set(a, b, v);
            t.set(b, a, -v);
        }
    }
    t
}

pub fn random_vector<R: Rng>(rng: &mut R, n: usize) -> FlatVector {
    FlatVector::new((0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()).expect("valid dimension")
}

/// Diagonal metric with magnitudes in `[0.5, 2]`; signs random unless `euclidean`.
pub fn random_metric<R: Rng>(rng: &mut R, n: usize, euclidean: bool) -> FlatMetric {
    let diag = (0..n)
        .map(|_| {
            let mag = rng.gen_range(0.5..=2.0);
            if euclidean || rng.gen_bool(0.5) {
                mag
            } else {
                -mag
            }
        })
        .collect();
    FlatMetric::new(diag).expect("nonzero entries")
}

/// Summary of one identity suite at one dimension.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity: String,
    pub dims: usize,
    pub trials: usize,
    pub max_rel_err: f64,
    /// Measured ratio for proportionality identities.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
    /// Pinned value the constant is compared against.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pinned: Option<f64>,
}

impl IdentityReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_rel_err < tol
    }
}

pub const ID_DELTA3: &str = "delta3_expansion";
pub const ID_DELTA4: &str = "delta4_trace_form";
pub const ID_EPS3: &str = "eps3_delta3";
pub const ID_EPS4: &str = "eps4_trace_form";

/// Cubic delta contraction against its two-term expansion. Relative error is
/// measured against the summed magnitude of the expansion terms.
pub fn suite_delta3<R: Rng>(rng: &mut R, n: usize, trials: usize) -> Result<IdentityReport> {
    check_dim(n)?;
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let f = random_antisymmetric(rng, n);
        let v = random_vector(rng, n);
        let g = random_metric(rng, n, false);
        let lhs = gen_delta_contract_3(&f, &v, &g)?;
        let (rhs, mag) = expanded_scalar_parts(&f, &v, &g);
        if mag > 0.0 {
            worst = worst.max((lhs - rhs).abs() / mag);
        }
    }
    Ok(IdentityReport {
        identity: ID_DELTA3.into(),
        dims: n,
        trials,
        max_rel_err: worst,
        constant: None,
        pinned: None,
    })
}

/// Ratio suite: `max_rel_err` is `(max − min) / |mean|` of the ratios, and
/// `constant` their mean.
fn ratio_suite<R: Rng>(
    rng: &mut R,
    name: &str,
    n: usize,
    trials: usize,
    pinned: f64,
    mut ratio: impl FnMut(&mut R) -> Result<f64>,
) -> Result<IdentityReport> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut sum = 0.0;
    for _ in 0..trials {
        let r = ratio(rng)?;
        lo = lo.min(r);
        hi = hi.max(r);
        sum += r;
    }
    let mean = sum / trials.max(1) as f64;
    let spread = if trials == 0 { 0.0 } else { (hi - lo) / mean.abs() };
    Ok(IdentityReport {
        identity: name.into(),
        dims: n,
        trials,
        max_rel_err: spread,
        constant: Some(mean),
        pinned: Some(pinned),
    })
}

/// Quartic delta contraction over the quartic trace form, `n ≥ 4`, random
/// signature metrics.
pub fn suite_delta4<R: Rng>(rng: &mut R, n: usize, trials: usize) -> Result<IdentityReport> {
    check_dim(n)?;
    if n < 4 {
        return Err(Error::InvalidArgument("quartic identity needs n >= 4".into()));
    }
    ratio_suite(rng, ID_DELTA4, n, trials, KAPPA, |rng| {
        let f = random_antisymmetric(rng, n);
        let g = random_metric(rng, n, false);
        Ok(gen_delta_contract_4(&f, &g)? / trace_form_quartic(&f, &g)?)
    })
}

/// Squared ε contraction over the cubic delta contraction, `n = 3`, Euclidean.
pub fn suite_eps3<R: Rng>(rng: &mut R, trials: usize) -> Result<IdentityReport> {
    ratio_suite(rng, ID_EPS3, 3, trials, EPS3_CONSTANT, |rng| {
        let f = random_antisymmetric(rng, 3);
        let v = random_vector(rng, 3);
        let g = random_metric(rng, 3, true);
        Ok(eps_square_scalar_3d(&f, &v, &g)? / gen_delta_contract_3(&f, &v, &g)?)
    })
}

/// Squared ε contraction over the quartic trace form, `n = 4`, Euclidean.
pub fn suite_eps4<R: Rng>(rng: &mut R, trials: usize) -> Result<IdentityReport> {
    ratio_suite(rng, ID_EPS4, 4, trials, EPS4_CONSTANT, |rng| {
        let f = random_antisymmetric(rng, 4);
        let g = random_metric(rng, 4, true);
        Ok(eps_square_ym_4d(&f, &g)? / trace_form_quartic(&f, &g)?)
    })
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn zero_field_gives_zero() {
        let g = FlatMetric::euclidean(4).unwrap();
        let f = FlatTensor2::zeros(4).unwrap();
        let v = FlatVector::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(gen_delta_contract_3(&f, &v, &g).unwrap(), 0.0);
        assert_eq!(gen_delta_contract_4(&f, &g).unwrap(), 0.0);
        assert_eq!(eps_square_ym_4d(&f, &g).unwrap(), 0.0);
        let m = FlatMetric::minkowski(4).unwrap();
        assert_eq!(born_infeld_density(&f, &m, 0.3, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn sparse_cubic_example() {
        let f = FlatTensor2::antisymmetric(3, &[(0, 1, 1.0)]).unwrap();
        let v = FlatVector::new(vec![0.0, 0.0, 1.0]).unwrap();
        let g = FlatMetric::euclidean(3).unwrap();
        assert_eq!(gen_delta_contract_3(&f, &v, &g).unwrap(), 4.0);
        assert_eq!(expanded_scalar_form(&f, &v, &g).unwrap(), 4.0);
    }

    #[test]
    fn quartic_trace_form_vanishes_in_two_dimensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let f = random_antisymmetric(&mut rng, 2);
            let g = random_metric(&mut rng, 2, false);
            let t = trace_form_quartic(&f, &g).unwrap();
            let scale = f.get(0, 1).powi(4) / (g.det() * g.det());
            assert!(t.abs() <= 1e-14 * scale.max(1e-300), "{t}");
            assert_eq!(gen_delta_contract_4(&f, &g).unwrap(), 0.0);
        }
    }

    #[test]
    fn eps4_two_plane_example() {
        let (a, b) = (0.7, -1.3);
        let f = FlatTensor2::antisymmetric(4, &[(0, 1, a), (2, 3, b)]).unwrap();
        assert!((eps_contract_4d(&f).unwrap() - 8.0 * a * b).abs() < 1e-15);
        let g = FlatMetric::euclidean(4).unwrap();
        let single = FlatTensor2::antisymmetric(4, &[(0, 1, a)]).unwrap();
        assert_eq!(eps_square_ym_4d(&single, &g).unwrap(), 0.0);
        let ratio = eps_square_ym_4d(&f, &g).unwrap() / trace_form_quartic(&f, &g).unwrap();
        assert!((ratio - EPS4_CONSTANT).abs() < 1e-12);
    }

    #[test]
    fn pinned_constants_match_measurements() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for n in 4..=6 {
            let r = suite_delta4(&mut rng, n, 40).unwrap();
            assert!(r.max_rel_err < 1e-10, "{r:?}");
            assert!((r.constant.unwrap() - KAPPA).abs() < 1e-10);
        }
        let r = suite_eps3(&mut rng, 40).unwrap();
        assert!((r.constant.unwrap() - EPS3_CONSTANT).abs() < 1e-10 && r.max_rel_err < 1e-10);
        let r = suite_eps4(&mut rng, 40).unwrap();
        assert!((r.constant.unwrap() - EPS4_CONSTANT).abs() < 1e-10 && r.max_rel_err < 1e-10);
    }

    #[test]
    fn eps3_ratio_holds_near_cancellation() {
        // Dual vector of F is (0.3, 0.7, 0.5); v is orthogonal up to 1e-7.
        let f = FlatTensor2::antisymmetric(3, &[(1, 2, 0.3), (2, 0, 0.7), (0, 1, 0.5)]).unwrap();
        let v = FlatVector::new(vec![0.7, -0.3, 1e-7]).unwrap();
        let g = FlatMetric::new(vec![1.3, 0.6, 1.9]).unwrap();
        let r = eps_square_scalar_3d(&f, &v, &g).unwrap() / gen_delta_contract_3(&f, &v, &g).unwrap();
        assert!((r - EPS3_CONSTANT).abs() < 1e-12, "{r}");
    }

    #[test]
    fn lorentzian_eps3_ratio_is_metric_sign() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = random_antisymmetric(&mut rng, 3);
        let v = random_vector(&mut rng, 3);
        let g = FlatMetric::new(vec![-1.0, 1.5, 0.7]).unwrap();
        let r = eps_square_scalar_3d(&f, &v, &g).unwrap() / gen_delta_contract_3(&f, &v, &g).unwrap();
        assert!((r + 1.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_errors() {
        let f = FlatTensor2::zeros(3).unwrap();
        let g = FlatMetric::euclidean(4).unwrap();
        assert!(gen_delta_contract_4(&f, &g).is_err());
        assert!(eps_square_ym_4d(&f, &FlatMetric::euclidean(3).unwrap()).is_err());
        assert!(FlatTensor2::zeros(9).is_err());
        assert!(FlatMetric::new(vec![1.0, 0.0]).is_err());
        let sym = FlatTensor2::new(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(matches!(
            trace_form_quartic(&sym, &FlatMetric::euclidean(2).unwrap()),
            Err(Error::NotAntisymmetric(_))
        ));
    }

    #[test]
    fn two_by_two_shift_determinant() {
        let f = FlatTensor2::antisymmetric(2, &[(0, 1, 0.8)]).unwrap();
        let g = FlatMetric::new(vec![1.3, 0.6]).unwrap();
        let d = shifted_determinant(&f, &g, 0.5).unwrap();
        assert!((d - (g.det() + 0.25 * 0.64)).abs() < 1e-15);
    }

    #[test]
    fn born_infeld_rejects_euclidean() {
        let f = FlatTensor2::zeros(3).unwrap();
        let g = FlatMetric::euclidean(3).unwrap();
        assert!(matches!(born_infeld_density(&f, &g, 0.1, 1.0), Err(Error::NotLorentzian(_))));
    }

    #[test]
    fn born_infeld_small_alpha_limit() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let f = random_antisymmetric(&mut rng, 4).scaled(0.3);
        let g = FlatMetric::new(vec![-1.0, 1.2, 0.8, 1.1]).unwrap();
        let lead = born_infeld_leading(&f, &g, 2.0).unwrap();
        // Richardson: the correction is O(α²).
        let d1 = born_infeld_density(&f, &g, 0.02, 2.0).unwrap();
        let d2 = born_infeld_density(&f, &g, 0.01, 2.0).unwrap();
        let extrapolated = (4.0 * d2 - d1) / 3.0;
        assert!((extrapolated - lead).abs() < 1e-8 * lead.abs().max(1.0), "{extrapolated} vs {lead}");
    }

    #[test]
    fn determinant_matches_known_values() {
        assert_eq!(determinant(&[2.0, 0.0, 0.0, 3.0], 2), 6.0);
        let a = [0.0, 1.0, 2.0, 1.0, 0.0, 3.0, 4.0, -3.0, 8.0];
        assert!((determinant(&a, 3) - (-2.0)).abs() < 1e-12);
    }

    fn arb_case() -> impl Strategy<Value = (usize, u64)> {
        (3usize..=8, any::<u64>())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn delta3_equals_expansion((n, seed) in arb_case()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let r = suite_delta3(&mut rng, n, 1).unwrap();
            prop_assert!(r.max_rel_err < 1e-12);
        }

        #[test]
        fn relabeling_invariance((n, seed) in arb_case()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_antisymmetric(&mut rng, n);
            let v = random_vector(&mut rng, n);
            let g = random_metric(&mut rng, n, false);
            let mut p: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                p.swap(i, rng.gen_range(0..=i));
            }
            let a = gen_delta_contract_3(&f, &v, &g).unwrap();
            let b = gen_delta_contract_3(&f.permuted(&p), &v.permuted(&p), &g.permuted(&p)).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
            if n <= 6 {
                let a = gen_delta_contract_4(&f, &g).unwrap();
                let b = gen_delta_contract_4(&f.permuted(&p), &g.permuted(&p)).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
            }
        }

        #[test]
        fn born_infeld_is_even(seed in any::<u64>(), n in 2usize..=6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_antisymmetric(&mut rng, n).scaled(0.4);
            let g = FlatMetric::minkowski(n).unwrap();
            let a = born_infeld_density(&f, &g, 0.5, 1.0).unwrap();
            let b = born_infeld_density(&f.scaled(-1.0), &g, 0.5, 1.0).unwrap();
            prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
        }
    }
}
