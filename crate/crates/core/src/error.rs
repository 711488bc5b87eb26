use alloc::string::String;

use thiserror::Error;

/// Errors produced by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{func}: argument outside the real-valued domain ({detail})")]
    Domain { func: &'static str, detail: String },

    #[error("invalid {family} parameters: {detail}")]
    InvalidParameter { family: &'static str, detail: String },

    #[error("x = {x} lies outside the support [{lo}, {hi}]")]
    OutsideSupport { x: f64, lo: f64, hi: f64 },

    #[error(
        "quadrature did not reach tolerance: estimate {value} with error {abs_error} after {subdivisions} subdivisions"
    )]
    Quadrature { value: f64, abs_error: f64, subdivisions: usize },

    #[error("integrand produced a non-finite value at x = {x}")]
    NonFiniteIntegrand { x: f64 },

    #[error("no root of the stationarity equation for x = {x} at α = {alpha}")]
    NoRoot { x: f64, alpha: f64 },

    #[error("mean normalized velocity {nu_m} is degenerate: ν̂_m = 1/2 forces b = 0 (perturb the mean or use the exact solver)")]
    DegenerateMean { nu_m: f64 },

    #[error("Lagrange multiplier b is zero")]
    DegenerateMultiplier,

    #[error("negative discriminant {discriminant} in the velocity law")]
    NegativeDiscriminant { discriminant: f64 },

    #[error("series expansion outside its validity region (|a| = {abs_a}, |a + bν̂| = {abs_end}, both must be < 1)")]
    SeriesValidity { abs_a: f64, abs_end: f64 },

    #[error("{what} did not converge after {iterations} iterations (residual norm {residual})")]
    NonConvergence { what: &'static str, iterations: usize, residual: f64 },

    #[error("need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("observed values have zero variance")]
    DegenerateVariance,

    #[error("observed value at index {index} is zero; relative error undefined")]
    ZeroObserved { index: usize },

    #[error("all computed CDF values are identical; k cannot be fitted")]
    NoFit,

    #[error("invalid profile sample: {0}")]
    InvalidSample(String),

    #[error("cannot parse distribution spec `{text}`: {detail}")]
    Parse { text: String, detail: String },
}

pub type Result<T> = core::result::Result<T, Error>;
