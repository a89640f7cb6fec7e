//! Numerical toolkit for the κ-μ shadowed fading family.
//!
//! The crate is layered bottom-up:
//!
//! - [`specfun`]: gamma-family functions, the generalized hypergeometric
//!   series and modified Bessel functions, all with explicit convergence
//!   control through [`specfun::SeriesControl`].
//! - [`quadrature`]: adaptive Gauss–Kronrod integration used for CDFs,
//!   normalization checks and exact ergodic capacity.
//! - [`channel_models`]: parameter records, the reduction of classic and
//!   generalized models onto κ-μ shadowed parameters, power PDFs, moments
//!   and amount of fading.
//! - [`sampler`]: seeded, stream-split Monte Carlo generation of
//!   instantaneous SNR from the physical constructions.
//! - [`capacity`]: closed-form high-SNR capacity losses plus quadrature and
//!   Monte Carlo capacity estimators.
//! - [`stats`]: goodness-of-fit helpers (chi-square, Kolmogorov–Smirnov).

pub mod capacity;
pub mod channel_models;
mod error;
pub mod quadrature;
pub mod sampler;
pub mod specfun;
pub mod stats;
pub mod textfmt;

pub use error::{Error, Result};
