//! Numerical workbench for U(∞) gauge theory obtained by dimensional reduction
//! of higher-derivative Lagrangians on a two-sphere.
//!
//! - [`sphere`]: spherical harmonics, quadrature and the Poisson bracket algebra.
//! - [`gauge`]: U(∞) field strengths, gauge transformations, covariant derivatives.
//! - [`tensor`]: brute-force generalized-delta and Levi-Civita contractions.
//! - [`reduction`]: block-metric reduction of the scalar, Yang-Mills and Born-Infeld models.
//! - [`monopole`]: BPS monopole profiles, energy functional and first-order corrections.

pub mod config;
pub mod error;
pub mod gauge;
pub mod monopole;
pub mod random;
pub mod reduction;
pub mod sphere;
pub mod stats;
pub mod tensor;

pub use error::{Error, Result};
