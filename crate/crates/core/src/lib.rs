//! Fractional differential entropy (FDE) of continuous distributions.
//!
//! For a density `f` and an order `0 < α ≤ 1` the entropy is
//!
//! ```text
//! H^α(f) = ∫ f(x) (−ln f(x))^α dx
//! ```
//!
//! which is real-valued only where `f ≤ 1` (unless `α = 1`, where it is the
//! Shannon differential entropy). The crate provides:
//!
//! - [`specfun`]: upper incomplete gamma, generalized exponential integral,
//!   Misra function, complete beta, generalized binomial coefficients.
//! - [`distributions`]: the distribution catalog with validated parameters,
//!   log-densities, density maxima and a textual spec syntax.
//! - [`quadrature`]: adaptive Gauss–Kronrod and a fixed graded Gauss–Legendre
//!   rule, both mapping infinite intervals onto `(0, 1]`.
//! - [`fde`]: numeric and closed-form entropy, cross validation, and the
//!   reference table recomputation.
//! - [`bounds`]: executable checks of the entropy bounds.
//! - [`velocity`]: the maximum-entropy open-channel velocity model
//!   (stationarity root, pdf, CDFs, Lagrange multipliers, velocity law).
//! - [`fitting`]: spatial-CDF fitting of `k` and validation metrics.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod distributions;
mod error;
pub mod fde;
pub mod fitting;
pub mod quadrature;
pub mod specfun;
pub mod velocity;

pub use distributions::{Admissibility, DensityRange, DistributionSpec, Family, Normalization, Support};
pub use error::{Error, Result};
pub use fde::{Alpha, FdeEvaluation, Method, Status};
pub use quadrature::QuadratureConfig;
