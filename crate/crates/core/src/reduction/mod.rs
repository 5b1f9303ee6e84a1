//! Reduction of the higher-derivative scalar and Yang-Mills Lagrangians on
//! `M_D × S²` with a monopole background on the sphere.
//!
//! The full `(D+2)`-dimensional fields are assembled pointwise on sphere
//! nodes from a [`GaugeConfig`] jet under the ansatz `∂_μA_m = 0`:
//!
//! - `F_μν = ∂_μA_ν − ∂_νA_μ`
//! - `F_μθ = −∂_θA_μ = sin θ ∂_{cos θ}A_μ`, `F_μφ = −∂_φA_μ`
//! - `F_θφ = b² sin θ / q`, the volume form of the `b² ĝ` block over `q`
//!
//! Terms are grouped by the number of inverse extra-space metric factors they
//! carry, which is what controls their scaling with the radius `b`.

mod born_infeld;
mod scan;

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gauge::{AdjointScalar, GaugeConfig};
use crate::sphere::{HarmonicField, SphereGrid};
use crate::tensor::{self, FlatMetric, FlatTensor2, FlatVector, MAX_DIM};

pub use born_infeld::{
    alpha_ordering, born_infeld_reduction_check, AlphaOrderingRow, AlphaOrderingTable, BornInfeldRow,
    BornInfeldTable,
};
pub use scan::{b_scaling_scan, two_dim_exact_check, ScanRow, ScanTable, TwoDimReport, TwoDimRow};

pub const MASTER_TOL: f64 = 1e-10;
pub const COVARIANT_TOL: f64 = 1e-9;
pub const VANISHING_TOL: f64 = 1e-12;
/// Masslessness is exact up to rounding of the individual terms.
pub const MASSLESS_TOL: f64 = 1e-14;
pub const MIN_SCALING_EXPONENT: f64 = 1.95;

/// Metric `diag(g_st) ⊕ b² diag(1, sin²θ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockMetric {
    g_spacetime: Vec<f64>,
    b: f64,
}

impl BlockMetric {
    /// `g_st` must have signature `(−, +, …, +)`.
    pub fn new(g_spacetime: Vec<f64>, b: f64) -> Result<Self> {
        let d = g_spacetime.len();
        if d == 0 || d + 2 > MAX_DIM {
            return Err(Error::InvalidArgument(format!("spacetime dimension {d} outside 1..={}", MAX_DIM - 2)));
        }
        if !(b > 0.0 && b.is_finite()) {
            return Err(Error::InvalidArgument(format!("radius b must be positive (got {b})")));
        }
        if !(g_spacetime[0] < 0.0) || g_spacetime[1..].iter().any(|&x| !(x > 0.0)) {
            return Err(Error::NotLorentzian(format!("spacetime metric {g_spacetime:?} is not (−,+,…,+)")));
        }
        Ok(Self { g_spacetime, b })
    }

    pub fn minkowski(d: usize, b: f64) -> Result<Self> {
        let mut g = vec![1.0; d];
        if d > 0 {
            g[0] = -1.0;
        }
        Self::new(g, b)
    }

    pub fn dim(&self) -> usize {
        self.g_spacetime.len()
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn g_spacetime(&self) -> &[f64] {
        &self.g_spacetime
    }

    pub fn with_b(&self, b: f64) -> Result<Self> {
        Self::new(self.g_spacetime.clone(), b)
    }

    /// Full diagonal at polar angle with `sin θ = s`.
    pub fn full(&self, sin_theta: f64) -> FlatMetric {
        let b2 = self.b * self.b;
        let mut d = self.g_spacetime.clone();
        d.push(b2);
        d.push(b2 * sin_theta * sin_theta);
        FlatMetric::new(d).expect("validated block metric")
    }
}

/// Monopole flux on the sphere, `F_θφ = b² sin θ / q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Background {
    q: f64,
}

impl Background {
    pub fn new(q: f64) -> Result<Self> {
        if q == 0.0 || !q.is_finite() {
            return Err(Error::InvalidArgument(format!("flux parameter q must be finite and nonzero (got {q})")));
        }
        Ok(Self { q })
    }

    /// Background whose bracket coupling at radius `b` is `e`.
    pub fn for_coupling(e: f64, b: f64) -> Result<Self> {
        Self::new(e * b * b)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `e = q / b²`.
    pub fn coupling(&self, b: f64) -> f64 {
        self.q / (b * b)
    }

    pub fn f_theta_phi(&self, b: f64, sin_theta: f64) -> f64 {
        b * b * sin_theta / self.q
    }

    /// Whether `1/q` is an integer or half-integer.
    pub fn quantized(&self) -> bool {
        let twice = 2.0 / self.q;
        (twice - twice.round()).abs() < 1e-12
    }
}

/// Real samples of the configuration on a grid.
pub(crate) struct Sampled {
    pub grid: SphereGrid,
    /// Per `μ`: value, `∂_{cos θ}`, `∂_φ`.
    pub a: Vec<[Vec<f64>; 3]>,
    /// `da[ν][μ][node] = ∂_νA_μ`.
    pub da: Vec<Vec<Vec<f64>>>,
    pub phi: Option<[Vec<f64>; 3]>,
    pub dphi: Vec<Vec<f64>>,
}

fn re(v: &[Complex64]) -> Vec<f64> {
    v.iter().map(|c| c.re).collect()
}

fn sample3(f: &HarmonicField, grid: &SphereGrid) -> Result<[Vec<f64>; 3]> {
    let s = f.sample(grid)?;
    Ok([re(&s.value), re(&s.d_dcos), re(&s.d_dphi)])
}

impl Sampled {
    pub fn new(cfg: &GaugeConfig, scalar: Option<&AdjointScalar>, grid: SphereGrid) -> Result<Self> {
        let d = cfg.dim();
        let mut a = Vec::with_capacity(d);
        let mut da = vec![Vec::with_capacity(d); d];
        for mu in 0..d {
            a.push(sample3(cfg.a(mu), &grid)?);
        }
        for (nu, row) in da.iter_mut().enumerate() {
            for mu in 0..d {
                row.push(re(&cfg.da(nu, mu).synthesize(&grid)?));
            }
        }
        let (phi, dphi) = match scalar {
            Some(s) => {
                if s.dphi.len() != d {
                    return Err(Error::DimensionMismatch { expected: d, got: s.dphi.len() });
                }
                let dphi = s.dphi.iter().map(|f| f.synthesize(&grid).map(|v| re(&v))).collect::<Result<_>>()?;
                (Some(sample3(&s.phi, &grid)?), dphi)
            }
            None => (None, Vec::new()),
        };
        Ok(Self { grid, a, da, phi, dphi })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// Assembled `(D+2)`-dimensional `F`, `∂φ` and metric at node `k`.
    pub fn point(&self, k: usize, bg: &Background, metric: &BlockMetric) -> (FlatTensor2, Option<FlatVector>, FlatMetric) {
        let d = self.dim();
        let n = d + 2;
        let (th, ph) = (d, d + 1);
        let ring = k / self.grid.n_phi();
        let sin = self.grid.sin_theta()[ring];
        let mut f = FlatTensor2::zeros(n).expect("n <= MAX_DIM");
        for mu in 0..d {
            for nu in (mu + 1)..d {
                let v = self.da[mu][nu][k] - self.da[nu][mu][k];
                f.set(mu, nu, v);
                f.set(nu, mu, -v);
            }
            let ft = sin * self.a[mu][1][k];
            let fp = -self.a[mu][2][k];
            f.set(mu, th, ft);
            f.set(th, mu, -ft);
            f.set(mu, ph, fp);
            f.set(ph, mu, -fp);
        }
        let fb = bg.f_theta_phi(metric.b(), sin);
        f.set(th, ph, fb);
        f.set(ph, th, -fb);
        let v = self.phi.as_ref().map(|phi| {
            let mut e: Vec<f64> = (0..d).map(|mu| self.dphi[mu][k]).collect();
            e.push(-sin * phi[1][k]);
            e.push(phi[2][k]);
            FlatVector::new(e).expect("n <= MAX_DIM")
        });
        (f, v, metric.full(sin))
    }
}

/// Small dense row-major matrix.
#[derive(Debug, Clone)]
struct Mat {
    r: usize,
    c: usize,
    x: Vec<f64>,
}

impl Mat {
    fn block(full: &[f64], n: usize, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let (r, c) = (rows.len(), cols.len());
        let mut x = Vec::with_capacity(r * c);
        for i in rows {
            for j in cols.clone() {
                x.push(full[i * n + j]);
            }
        }
        Self { r, c, x }
    }

    fn mul(&self, o: &Mat) -> Mat {
        debug_assert_eq!(self.c, o.r);
        let mut x = vec![0.0; self.r * o.c];
        for i in 0..self.r {
            for k in 0..self.c {
                let a = self.x[i * self.c + k];
                for j in 0..o.c {
                    x[i * o.c + j] += a * o.x[k * o.c + j];
                }
            }
        }
        Mat { r: self.r, c: o.c, x }
    }

    fn trace(&self) -> f64 {
        (0..self.r.min(self.c)).map(|i| self.x[i * self.c + i]).sum()
    }
}

/// Blocks of `M^A_B = g^{AA} F_AB`: `P` (st,st), `Q` (st,ex), `R` (ex,st), `S` (ex,ex).
/// `R` and `S` carry one inverse extra-space metric factor each.
fn blocks(f: &FlatTensor2, g: &FlatMetric, d: usize) -> (Mat, Mat, Mat, Mat) {
    let n = f.n();
    let mut m = vec![0.0; n * n];
    for a in 0..n {
        for b in 0..n {
            m[a * n + b] = g.inv(a) * f.get(a, b);
        }
    }
    (
        Mat::block(&m, n, 0..d, 0..d),
        Mat::block(&m, n, 0..d, d..n),
        Mat::block(&m, n, d..n, 0..d),
        Mat::block(&m, n, d..n, d..n),
    )
}

pub const SCALAR_GROUPS: usize = 4;
pub const YM_GROUPS: usize = 5;

/// Pointwise groups of `½ δ^{ABC}_{DEF} F^{DE} F_AB ∂^Fφ ∂_Cφ`, indexed by the
/// number of inverse extra-space metric factors, with the summed magnitude of
/// each group's constituent terms.
///
/// Writes `½L = (F_AB F^AB)(v^C v_C) − 2 Σ_A g^{AA} u_A²` with
/// `u_A = F_AB v^B`, then splits every sum into spacetime and extra parts.
pub(crate) fn scalar_groups_at(f: &FlatTensor2, v: &FlatVector, g: &FlatMetric, d: usize) -> ([f64; 4], [f64; 4]) {
    let n = f.n();
    let (p, q, r, s) = blocks(f, g, d);
    let a0 = p.mul(&p).trace();
    let a1 = 2.0 * q.mul(&r).trace();
    let a2 = s.mul(&s).trace();
    let vs: f64 = (0..d).map(|c| g.inv(c) * v.get(c) * v.get(c)).sum();
    let ve: f64 = (d..n).map(|c| g.inv(c) * v.get(c) * v.get(c)).sum();
    let (mut ss, mut sx, mut se, mut es, mut ex, mut ee) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    let (mut ss_m, mut sx_m, mut se_m, mut es_m, mut ex_m, mut ee_m) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for a in 0..n {
        let us: f64 = (0..d).map(|b| f.get(a, b) * g.inv(b) * v.get(b)).sum();
        let ue: f64 = (d..n).map(|b| f.get(a, b) * g.inv(b) * v.get(b)).sum();
        let ga = g.inv(a);
        let (t0, t1, t2) = (ga * us * us, 2.0 * ga * us * ue, ga * ue * ue);
        if a < d {
            ss += t0;
            sx += t1;
            se += t2;
            ss_m += t0.abs();
            sx_m += t1.abs();
            se_m += t2.abs();
        } else {
            es += t0;
            ex += t1;
            ee += t2;
            es_m += t0.abs();
            ex_m += t1.abs();
            ee_m += t2.abs();
        }
    }
    let groups = [
        -a0 * vs - 2.0 * ss,
        -a0 * ve - a1 * vs - 2.0 * (sx + es),
        -a1 * ve - a2 * vs - 2.0 * (se + ex),
        -a2 * ve - 2.0 * ee,
    ];
    let mags = [
        (a0 * vs).abs() + 2.0 * ss_m,
        (a0 * ve).abs() + (a1 * vs).abs() + 2.0 * (sx_m + es_m),
        (a1 * ve).abs() + (a2 * vs).abs() + 2.0 * (se_m + ex_m),
        (a2 * ve).abs() + 2.0 * ee_m,
    ];
    (groups, mags)
}

/// Pointwise groups of `(F_AB F^AB)² − 2 tr M⁴`, indexed as in
/// [`scalar_groups_at`].
pub(crate) fn ym_groups_at(f: &FlatTensor2, g: &FlatMetric, d: usize) -> ([f64; 5], [f64; 5]) {
    let (p, q, r, s) = blocks(f, g, d);
    let pp = p.mul(&p);
    let qr = q.mul(&r);
    let ss = s.mul(&s);
    let a0 = pp.trace();
    let a1 = 2.0 * qr.trace();
    let a2 = ss.trace();
    let p4 = pp.mul(&pp).trace();
    let ppqr = pp.mul(&qr).trace();
    let pqsr = p.mul(&q).mul(&s).mul(&r).trace();
    let qrqr = qr.mul(&qr).trace();
    let qssr = q.mul(&ss).mul(&r).trace();
    let s4 = ss.mul(&ss).trace();
    let groups = [
        a0 * a0 - 2.0 * p4,
        2.0 * a0 * a1 - 8.0 * ppqr,
        a1 * a1 + 2.0 * a0 * a2 - 8.0 * pqsr - 4.0 * qrqr,
        2.0 * a1 * a2 - 8.0 * qssr,
        a2 * a2 - 2.0 * s4,
    ];
    let mags = [
        a0 * a0 + 2.0 * p4.abs(),
        (2.0 * a0 * a1).abs() + 8.0 * ppqr.abs(),
        a1 * a1 + (2.0 * a0 * a2).abs() + 8.0 * pqsr.abs() + 4.0 * qrqr.abs(),
        (2.0 * a1 * a2).abs() + 8.0 * qssr.abs(),
        a2 * a2 + 2.0 * s4.abs(),
    ];
    (groups, mags)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Scalar,
    YangMills,
}

/// Index of the covariant group in both models.
pub const COVARIANT_GROUP: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VanishingResidual {
    pub group: usize,
    pub value: f64,
    pub magnitude: f64,
    /// `|value| / magnitude`, zero when the magnitude is zero.
    pub relative: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residuals {
    /// `|Σ groups − oracle| / max(|oracle|, Σ |groups|)`.
    pub master: f64,
    /// Same against the permutation-sum quartic delta divided by `κ` (Yang-Mills only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub master_delta4: Option<f64>,
    /// `|group − reference| / max(|group|, |reference|)`.
    pub covariant: f64,
    pub vanishing: Vec<VanishingResidual>,
}

/// Classified line groups of one model at one configuration, all integrated
/// over the unit sphere.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionReport {
    pub model: Model,
    pub dim: usize,
    pub b: f64,
    pub q: f64,
    /// Bracket coupling `q / b²` of the reduced side.
    pub e: f64,
    /// Calibrated orientation sign inside the covariant combinations.
    pub sign: f64,
    pub quantized_flux: bool,
    /// Entry `k` collects terms with `k` inverse extra-space metric factors.
    pub groups: Vec<f64>,
    pub group_magnitudes: Vec<f64>,
    pub covariant_group: usize,
    /// `(2/q²) Σ g^{μμ} ∫ (D_μφ)² dΩ` or `(4/q²) Σ g^{μμ} g^{νν} ∫ F̃_μν² dΩ`.
    pub reduced_reference: f64,
    pub reduced_reference_over_4pi: f64,
    pub covariant_group_over_4pi: f64,
    pub oracle: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_delta4: Option<f64>,
    pub residuals: Residuals,
    pub grid: [usize; 2],
}

impl ReductionReport {
    pub fn passes(&self) -> bool {
        self.residuals.master < MASTER_TOL
            && self.residuals.master_delta4.is_none_or(|r| r < MASTER_TOL)
            && self.residuals.covariant < COVARIANT_TOL
            && self.residuals.vanishing.iter().all(|v| v.relative < VANISHING_TOL)
    }

    /// Sum of the groups other than the covariant and the vanishing ones.
    pub fn residual_groups(&self) -> (f64, f64) {
        (self.groups[1], self.groups[0])
    }
}

pub(crate) fn rel_diff(a: f64, b: f64) -> f64 {
    let m = a.abs().max(b.abs());
    if m == 0.0 {
        0.0
    } else {
        (a - b).abs() / m
    }
}

fn vanishing(group: usize, value: f64, magnitude: f64) -> VanishingResidual {
    VanishingResidual {
        group,
        value,
        magnitude,
        relative: if magnitude == 0.0 { 0.0 } else { value.abs() / magnitude },
    }
}

fn check_dims(cfg: &GaugeConfig, metric: &BlockMetric) -> Result<()> {
    if cfg.dim() != metric.dim() {
        return Err(Error::DimensionMismatch { expected: metric.dim(), got: cfg.dim() });
    }
    Ok(())
}

/// Grid exact for integrands quartic in fields of band limit `l`.
pub fn reduction_grid(l: usize) -> SphereGrid {
    SphereGrid::for_degree(4 * l.max(1))
}

fn master_residual(groups: &[f64], oracle: f64) -> f64 {
    let total: f64 = groups.iter().sum();
    let scale = groups.iter().map(|g| g.abs()).sum::<f64>().max(oracle.abs());
    if scale == 0.0 {
        0.0
    } else {
        (total - oracle).abs() / scale
    }
}

pub(crate) fn scalar_report_with_sign(
    cfg: &GaugeConfig,
    s: &AdjointScalar,
    bg: &Background,
    metric: &BlockMetric,
    grid: SphereGrid,
    sign: f64,
) -> Result<ReductionReport> {
    check_dims(cfg, metric)?;
    let l = cfg.l_max().max(s.l_max());
    grid.require_degree(4 * l)?;
    let d = cfg.dim();
    let sampled = Sampled::new(cfg, Some(s), grid)?;
    let weights = sampled.grid.weights();
    let mut groups = vec![0.0; SCALAR_GROUPS];
    let mut mags = vec![0.0; SCALAR_GROUPS];
    let mut oracle = 0.0;
    for (k, &w) in weights.iter().enumerate() {
        let (f, v, g) = sampled.point(k, bg, metric);
        let v = v.expect("scalar sampled");
        let (gr, mg) = scalar_groups_at(&f, &v, &g, d);
        for i in 0..SCALAR_GROUPS {
            groups[i] += w * gr[i];
            mags[i] += w * mg[i];
        }
        oracle += w * 0.5 * tensor::gen_delta_contract_3(&f, &v, &g)?;
    }
    let e = bg.coupling(metric.b());
    let q = bg.q();
    let reduced = 2.0 / (q * q) * cfg.with_coupling(sign * e).action_scalar(s, metric.g_spacetime())?;
    let residuals = Residuals {
        master: master_residual(&groups, oracle),
        master_delta4: None,
        covariant: rel_diff(groups[COVARIANT_GROUP], reduced),
        vanishing: vec![vanishing(3, groups[3], mags[3])],
    };
    Ok(ReductionReport {
        model: Model::Scalar,
        dim: d,
        b: metric.b(),
        q,
        e,
        sign,
        quantized_flux: bg.quantized(),
        covariant_group_over_4pi: groups[COVARIANT_GROUP] / (4.0 * PI),
        groups,
        group_magnitudes: mags,
        covariant_group: COVARIANT_GROUP,
        reduced_reference: reduced,
        reduced_reference_over_4pi: reduced / (4.0 * PI),
        oracle,
        oracle_delta4: None,
        residuals,
        grid: [sampled.grid.n_theta(), sampled.grid.n_phi()],
    })
}

pub(crate) fn ym_report_with_sign(
    cfg: &GaugeConfig,
    bg: &Background,
    metric: &BlockMetric,
    grid: SphereGrid,
    sign: f64,
) -> Result<ReductionReport> {
    check_dims(cfg, metric)?;
    grid.require_degree(4 * cfg.l_max())?;
    let d = cfg.dim();
    let sampled = Sampled::new(cfg, None, grid)?;
    let weights = sampled.grid.weights();
    let mut groups = vec![0.0; YM_GROUPS];
    let mut mags = vec![0.0; YM_GROUPS];
    let mut oracle = 0.0;
    let mut oracle4 = 0.0;
    for (k, &w) in weights.iter().enumerate() {
        let (f, _, g) = sampled.point(k, bg, metric);
        let (gr, mg) = ym_groups_at(&f, &g, d);
        for i in 0..YM_GROUPS {
            groups[i] += w * gr[i];
            mags[i] += w * mg[i];
        }
        oracle += w * tensor::trace_form_quartic(&f, &g)?;
        oracle4 += w * tensor::gen_delta_contract_4(&f, &g)? / tensor::KAPPA;
    }
    let e = bg.coupling(metric.b());
    let q = bg.q();
    let reduced = 4.0 / (q * q) * cfg.with_coupling(sign * e).action_ym(metric.g_spacetime())?;
    let residuals = Residuals {
        master: master_residual(&groups, oracle),
        master_delta4: Some(master_residual(&groups, oracle4)),
        covariant: rel_diff(groups[COVARIANT_GROUP], reduced),
        vanishing: vec![vanishing(3, groups[3], mags[3]), vanishing(4, groups[4], mags[4])],
    };
    Ok(ReductionReport {
        model: Model::YangMills,
        dim: d,
        b: metric.b(),
        q,
        e,
        sign,
        quantized_flux: bg.quantized(),
        covariant_group_over_4pi: groups[COVARIANT_GROUP] / (4.0 * PI),
        groups,
        group_magnitudes: mags,
        covariant_group: COVARIANT_GROUP,
        reduced_reference: reduced,
        reduced_reference_over_4pi: reduced / (4.0 * PI),
        oracle,
        oracle_delta4: Some(oracle4),
        residuals,
        grid: [sampled.grid.n_theta(), sampled.grid.n_phi()],
    })
}

/// Classified groups of the scalar model at one configuration.
pub fn scalar_line_values(
    cfg: &GaugeConfig,
    s: &AdjointScalar,
    bg: &Background,
    metric: &BlockMetric,
) -> Result<ReductionReport> {
    let grid = reduction_grid(cfg.l_max().max(s.l_max()));
    scalar_report_with_sign(cfg, s, bg, metric, grid, calibrated_sign())
}

/// As [`scalar_line_values`] on a caller-supplied grid.
pub fn scalar_line_values_on(
    cfg: &GaugeConfig,
    s: &AdjointScalar,
    bg: &Background,
    metric: &BlockMetric,
    grid: SphereGrid,
) -> Result<ReductionReport> {
    scalar_report_with_sign(cfg, s, bg, metric, grid, calibrated_sign())
}

/// Classified groups of the Yang-Mills model at one configuration.
pub fn ym_line_values(cfg: &GaugeConfig, bg: &Background, metric: &BlockMetric) -> Result<ReductionReport> {
    ym_report_with_sign(cfg, bg, metric, reduction_grid(cfg.l_max()), calibrated_sign())
}

pub fn ym_line_values_on(
    cfg: &GaugeConfig,
    bg: &Background,
    metric: &BlockMetric,
    grid: SphereGrid,
) -> Result<ReductionReport> {
    ym_report_with_sign(cfg, bg, metric, grid, calibrated_sign())
}

/// Outcome of the one-time orientation calibration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignCalibration {
    pub sign: f64,
    pub scalar_residual_plus: f64,
    pub scalar_residual_minus: f64,
    pub ym_residual_plus: f64,
    pub ym_residual_minus: f64,
}

/// Reference configuration: `A_0 = T¹`, `φ = T²`, `∂_0φ = T³` for the scalar
/// model and `A_0 = T¹`, `A_1 = T²`, `∂_0A_1 = T³` for Yang-Mills, so that the
/// cross terms between derivative and bracket are as large as possible.
pub fn reference_configuration() -> (GaugeConfig, AdjointScalar, GaugeConfig) {
    let t = crate::sphere::su2_generators().t;
    let z = HarmonicField::zeros(1);
    let scalar_cfg = GaugeConfig::new(vec![t[0].clone(), z.clone()], vec![vec![z.clone(); 2]; 2], 1.0)
        .expect("real generators");
    let s = AdjointScalar::new(t[1].clone(), vec![t[2].clone(), z.clone()]).expect("real generators");
    let mut da = vec![vec![z.clone(); 2]; 2];
    da[0][1] = t[2].clone();
    let ym_cfg = GaugeConfig::new(vec![t[0].clone(), t[1].clone()], da, 1.0).expect("real generators");
    (scalar_cfg, s, ym_cfg)
}

/// Fixes the sign `s` in `D_μφ = ∂_μφ + s e {A_μ, φ}` by comparing both
/// choices on [`reference_configuration`] at `q = b = 1`.
pub fn calibrate_sign() -> SignCalibration {
    let (scfg, s, ycfg) = reference_configuration();
    let bg = Background::new(1.0).expect("q = 1");
    let metric = BlockMetric::minkowski(2, 1.0).expect("valid");
    let grid = || reduction_grid(2);
    let sc = |sign| {
        scalar_report_with_sign(&scfg, &s, &bg, &metric, grid(), sign)
            .expect("reference configuration is valid")
            .residuals
            .covariant
    };
    let ym = |sign| {
        ym_report_with_sign(&ycfg, &bg, &metric, grid(), sign)
            .expect("reference configuration is valid")
            .residuals
            .covariant
    };
    let (sp, sm, yp, ymn) = (sc(1.0), sc(-1.0), ym(1.0), ym(-1.0));
    SignCalibration {
        sign: if sp <= sm { 1.0 } else { -1.0 },
        scalar_residual_plus: sp,
        scalar_residual_minus: sm,
        ym_residual_plus: yp,
        ym_residual_minus: ymn,
    }
}

static CALIBRATION: OnceLock<SignCalibration> = OnceLock::new();

pub fn sign_calibration() -> SignCalibration {
    *CALIBRATION.get_or_init(calibrate_sign)
}

pub fn calibrated_sign() -> f64 {
    sign_calibration().sign
}

/// Scalar-sector value with every spacetime derivative and the gauge field
/// switched off, for a scalar with nonzero modes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MasslessnessReport {
    pub dim: usize,
    pub b: f64,
    pub q: f64,
    pub value: f64,
    pub oracle: f64,
    /// Summed magnitude of every term that enters the value.
    pub magnitude: f64,
    pub relative: f64,
}

impl MasslessnessReport {
    pub fn passes(&self) -> bool {
        self.relative <= MASSLESS_TOL
    }
}

pub fn masslessness_check(phi: &HarmonicField, bg: &Background, metric: &BlockMetric) -> Result<MasslessnessReport> {
    let d = metric.dim();
    let l = phi.l_max().max(1);
    let cfg = GaugeConfig::zero(d, l, bg.coupling(metric.b()));
    let s = AdjointScalar::new(phi.clone(), vec![HarmonicField::zeros(l); d])?;
    let r = scalar_report_with_sign(&cfg, &s, bg, metric, reduction_grid(l), calibrated_sign())?;
    let value: f64 = r.groups.iter().sum();
    let magnitude: f64 = r.group_magnitudes.iter().sum();
    Ok(MasslessnessReport {
        dim: d,
        b: metric.b(),
        q: bg.q(),
        value,
        oracle: r.oracle,
        magnitude,
        relative: if magnitude == 0.0 { 0.0 } else { value.abs().max(r.oracle.abs()) / magnitude },
    })
}
