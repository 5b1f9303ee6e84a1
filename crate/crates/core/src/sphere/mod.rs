//! Band-limited function algebra on the unit two-sphere.

mod algebra;
mod field;
mod grid;
mod harmonics;

pub use algebra::{
    bracket, closure_of, product, require_same_band, su2_generators, Closure, StructureConstants,
    Su2Basis, Su2Generators, SU2_CLOSURE_TOL,
};
pub use field::{FieldSamples, HarmonicField, REALITY_TOL};
pub use grid::{gauss_legendre, SphereGrid};
pub use harmonics::{eval_harmonic, legendre_with_derivative, lm_from_index, lm_index, n_coeffs};

/// Grid resolving triple products of fields with band limit `l_max`.
pub fn make_grid(l_max: usize) -> crate::Result<SphereGrid> {
    SphereGrid::make(l_max)
}
