//! Eigenvalue-spacing statistics for the Gaussian random matrix ensembles.
//!
//! The crate collects everything needed to compare spacing distributions:
//!
//! - [`specfun`]: log-gamma, digamma, trigamma and the regularized lower
//!   incomplete gamma function.
//! - [`laws`]: closed-form unit-scale spacing laws (Wigner surmise, the GOE
//!   distribution-function bounds, gamma and generalized gamma) with
//!   quadrature moments, seeded sampling and Kolmogorov–Smirnov distances.
//! - [`ensembles`]: GOE/GUE/GSE matrix sampling, eigenvalues and bulk
//!   spacing extraction, pooled into unit-mean [`SpacingSample`]s.
//! - [`analysis`]: summary statistics, gamma and generalized-gamma fits,
//!   block statistics and the mean/CV independence diagnostic.
//! - [`infogeo`]: the affine immersion of the gamma manifold and arc length
//!   along the shape coordinate.
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the CLI
//! live in the `spacing-lab` crate.

#![no_std]
// `!(x > 0.0)` is deliberate: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod ensembles;
mod error;
pub mod infogeo;
pub mod laws;
mod math;
pub mod quad;
pub mod rng;
mod sample;
pub mod specfun;

pub use error::{Error, Result};
pub use sample::SpacingSample;
pub use specfun::PositiveReal;
