//! Maximum-entropy velocity model for wide open channels.
//!
//! The stationarity condition `y^α − α y^{α−1} = x` links `y = −ln f(ν̂)` to
//! `x = a + bν̂`. At `α = 1/2` it reduces to `y² − y(1 + x²) + 1/4 = 0`, whose
//! two roots give the [`Branch::PlusRoot`] and [`Branch::MinusRoot`] densities.

use alloc::format;

use libm::{exp, fabs, pow, sqrt};

use crate::fde::Alpha;
use crate::quadrature::{integrate, QuadratureConfig};
use crate::specfun::gen_binomial;
use crate::{Error, Result};

/// `2√2·e^{1/2}`.
pub const C0: f64 = 4.663_287_963_194_249;
/// `e^{-1/2}`.
const E_M_HALF: f64 = 0.606_530_659_712_633_4;
const SQRT_2: f64 = core::f64::consts::SQRT_2;
/// Half-width of the excluded neighbourhood around `ν̂_m = 1/2`.
pub const DEGENERATE_MEAN_WIDTH: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branch {
    /// `+x√(x²+2)`: the stationarity root, used for the density.
    #[default]
    PlusRoot,
    /// `−x√(x²+2)`: used for the velocity law.
    MinusRoot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    LinearTruncated,
    NumericExact,
}

/// Lagrange multipliers for a given mean normalized velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangePair {
    pub a: f64,
    pub b: f64,
    pub nu_m: f64,
    pub solver: Solver,
    /// `(∫f − 1, ∫ν̂f − ν̂_m)` by quadrature of the plus-root density.
    pub constraint_residuals: (f64, f64),
}

impl LagrangePair {
    /// A pair with arbitrary multipliers, residuals evaluated by quadrature.
    pub fn from_multipliers(a: f64, b: f64, nu_m: f64, solver: Solver, cfg: &QuadratureConfig) -> Result<Self> {
        let constraint_residuals = constraint_residuals(a, b, nu_m, cfg)?;
        Ok(Self { a, b, nu_m, solver, constraint_residuals })
    }

    pub fn residual_norm(&self) -> f64 {
        fabs(self.constraint_residuals.0).max(fabs(self.constraint_residuals.1))
    }
}

/// Truncation orders of the triple series: `i ≤ i_max`, `k ≤ k_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeriesOrder {
    pub i_max: u32,
    pub k_max: u32,
}

impl SeriesOrder {
    pub const TWO_TERM: SeriesOrder = SeriesOrder { i_max: 1, k_max: 0 };
}

/// `y^α − α y^{α−1} − x`.
pub fn stationarity_residual(y: f64, x: f64, alpha: Alpha) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Domain { func: "stationarity_residual", detail: format!("y = {y} must be positive") });
    }
    Ok(stationarity_lhs(y, alpha.value()) - x)
}

fn stationarity_lhs(y: f64, a: f64) -> f64 {
    if a == 1.0 {
        y - 1.0
    } else {
        pow(y, a) - a * pow(y, a - 1.0)
    }
}

/// Positive root `y` of the stationarity equation.
///
/// The left side is strictly increasing in `y > 0`, so the root is unique.
/// For `α < 1` it exists for every real `x`; for `α = 1` it is `1 + x` and
/// needs `x > −1`.
pub fn solve_stationarity(x: f64, alpha: Alpha) -> Result<f64> {
    let a = alpha.value();
    if !x.is_finite() {
        return Err(Error::NoRoot { x, alpha: a });
    }
    if alpha.is_shannon() {
        return if x > -1.0 { Ok(1.0 + x) } else { Err(Error::NoRoot { x, alpha: a }) };
    }
    let g = |y: f64| stationarity_lhs(y, a) - x;
    let (mut lo, mut hi) = (1.0, 1.0);
    let mut n = 0;
    while g(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        n += 1;
        if n > 2100 {
            return Err(Error::NoRoot { x, alpha: a });
        }
    }
    while g(lo) > 0.0 {
        hi = lo;
        lo *= 0.5;
        n += 1;
        if n > 2100 || lo == 0.0 {
            return Err(Error::NoRoot { x, alpha: a });
        }
    }
    let mut y = sqrt(lo * hi);
    for _ in 0..200 {
        let r = g(y);
        if r == 0.0 {
            return Ok(y);
        }
        if r < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let d = a * pow(y, a - 2.0) * (y + 1.0 - a);
        let mut next = y - r / d;
        if !(next > lo && next < hi) {
            next = sqrt(lo * hi);
        }
        if fabs(next - y) <= 2.0 * f64::EPSILON * y || hi - lo <= 2.0 * f64::EPSILON * hi {
            let best = if fabs(g(next)) < fabs(r) { next } else { y };
            return Ok(best);
        }
        y = next;
    }
    Ok(y)
}

/// Both roots of `y² − y(1 + x²) + 1/4 = 0`, computed without cancellation.
pub fn quadratic_roots(x: f64) -> (f64, f64) {
    let s = x * sqrt(x * x + 2.0);
    let q = 1.0 + x * x;
    if s >= 0.0 {
        let plus = 0.5 * (q + s);
        (plus, 0.25 / plus)
    } else {
        let minus = 0.5 * (q - s);
        (0.25 / minus, minus)
    }
}

/// `y = ((1 + x²) ± x√(x² + 2))/2` for the chosen branch.
pub fn quadratic_root(x: f64, branch: Branch) -> f64 {
    let (p, m) = quadratic_roots(x);
    match branch {
        Branch::PlusRoot => p,
        Branch::MinusRoot => m,
    }
}

/// `f(ν̂) = exp(−y(a + bν̂))`.
pub fn max_entropy_pdf(nu_hat: f64, lag: &LagrangePair, branch: Branch) -> f64 {
    pdf_ab(nu_hat, lag.a, lag.b, branch)
}

fn pdf_ab(nu_hat: f64, a: f64, b: f64, branch: Branch) -> f64 {
    exp(-quadratic_root(a + b * nu_hat, branch))
}

/// Truncated CDF `−e^{-1/2}/(2√2 b) · [(a + bν̂)² − a²]`.
pub fn cdf_truncated(nu_hat: f64, lag: &LagrangePair) -> Result<f64> {
    cdf_truncated_ab(nu_hat, lag.a, lag.b)
}

fn cdf_truncated_ab(nu_hat: f64, a: f64, b: f64) -> Result<f64> {
    if b == 0.0 {
        return Err(Error::DegenerateMultiplier);
    }
    let x = a + b * nu_hat;
    Ok(-(E_M_HALF / (2.0 * SQRT_2 * b)) * (x * x - a * a))
}

/// Result of the series CDF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesCdf {
    pub value: f64,
    /// Evaluated outside `|a| < 1, |a + bν̂| < 1` with the guard overridden.
    pub extrapolated: bool,
}

/// Triple binomial series of the CDF truncated at `order`.
///
/// Sums `i ≤ i_max`, `0 ≤ j ≤ i`, `k ≤ k_max` of
/// `C(i,j) C(j/2,k) (−1)^i 2^{j/2−i−k}/i! · (X^p − a^p)/p`, `p = 1 + 2(i+k) − j`,
/// `X = a + bν̂`, times `e^{-1/2}/b`.
pub fn cdf_series(nu_hat: f64, lag: &LagrangePair, order: SeriesOrder, allow_outside: bool) -> Result<SeriesCdf> {
    let (a, b) = (lag.a, lag.b);
    if b == 0.0 {
        return Err(Error::DegenerateMultiplier);
    }
    let x = a + b * nu_hat;
    let inside = fabs(a) < 1.0 && fabs(x) < 1.0;
    if !inside && !allow_outside {
        return Err(Error::SeriesValidity { abs_a: fabs(a), abs_end: fabs(x) });
    }
    let mut sum = 0.0;
    let mut inv_fact = 1.0;
    for i in 0..=order.i_max {
        if i > 0 {
            inv_fact /= i as f64;
        }
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        for j in 0..=i {
            let cij = gen_binomial(i as f64, j as usize);
            for k in 0..=order.k_max {
                let cjk = gen_binomial(0.5 * j as f64, k as usize);
                if cjk == 0.0 {
                    continue;
                }
                let p = (1 + 2 * (i + k) - j) as i32;
                let scale = pow(2.0, 0.5 * j as f64 - i as f64 - k as f64);
                let diff = (powi(x, p) - powi(a, p)) / p as f64;
                sum += cij * cjk * sign * scale * inv_fact * diff;
            }
        }
    }
    Ok(SeriesCdf { value: E_M_HALF / b * sum, extrapolated: !inside })
}

fn powi(x: f64, p: i32) -> f64 {
    let mut r = 1.0;
    for _ in 0..p {
        r *= x;
    }
    r
}

/// `∫_0^ν̂ f(u) du` with the plus-root density.
pub fn cdf_quadrature(nu_hat: f64, lag: &LagrangePair, cfg: &QuadratureConfig) -> Result<f64> {
    if nu_hat == 0.0 {
        return Ok(0.0);
    }
    Ok(integrate(|u| max_entropy_pdf(u, lag, Branch::PlusRoot), 0.0, nu_hat, cfg)?.value)
}

/// `(∫_0^1 f − 1, ∫_0^1 ν̂ f − ν̂_m)` with the plus-root density.
pub fn constraint_residuals(a: f64, b: f64, nu_m: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let m0 = integrate(|u| pdf_ab(u, a, b, Branch::PlusRoot), 0.0, 1.0, cfg)?.value;
    let m1 = integrate(|u| u * pdf_ab(u, a, b, Branch::PlusRoot), 0.0, 1.0, cfg)?.value;
    Ok((m0 - 1.0, m1 - nu_m))
}

fn check_nu_m(nu_m: f64) -> Result<()> {
    if !(nu_m > 0.0 && nu_m < 1.0) {
        return Err(Error::Domain { func: "lagrange", detail: format!("ν̂_m = {nu_m} must lie in (0, 1)") });
    }
    if fabs(nu_m - 0.5) <= DEGENERATE_MEAN_WIDTH {
        return Err(Error::DegenerateMean { nu_m });
    }
    Ok(())
}

/// Closed solution of `b + 2a = −C0`, `3a + 2b = −3·C0·ν̂_m`.
pub fn lagrange_linear_ab(nu_m: f64) -> Result<(f64, f64)> {
    check_nu_m(nu_m)?;
    Ok((C0 * (3.0 * nu_m - 2.0), -3.0 * C0 * (2.0 * nu_m - 1.0)))
}

/// Linear two-term solve, with constraint residuals filled by quadrature.
pub fn solve_lagrange_linear(nu_m: f64, cfg: &QuadratureConfig) -> Result<LagrangePair> {
    let (a, b) = lagrange_linear_ab(nu_m)?;
    LagrangePair::from_multipliers(a, b, nu_m, Solver::LinearTruncated, cfg)
}

/// Target residual of the exact solver.
pub const EXACT_TOLERANCE: f64 = 1e-8;

/// Best point reached by the exact solver, converged or not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactAttempt {
    pub best: LagrangePair,
    pub converged: bool,
    pub iterations: usize,
}

fn moments_and_jacobian(a: f64, b: f64, cfg: &QuadratureConfig) -> Result<([f64; 2], [[f64; 2]; 2])> {
    // ∂f/∂x = −f·dy/dx with dy/dx = x + (x² + 1)/√(x² + 2) on the plus branch.
    let dfdx = |u: f64| {
        let x = a + b * u;
        -pdf_ab(u, a, b, Branch::PlusRoot) * (x + (x * x + 1.0) / sqrt(x * x + 2.0))
    };
    let q = |g: &dyn Fn(f64) -> f64| integrate(g, 0.0, 1.0, cfg).map(|r| r.value);
    let m0 = q(&|u| pdf_ab(u, a, b, Branch::PlusRoot))?;
    let m1 = q(&|u| u * pdf_ab(u, a, b, Branch::PlusRoot))?;
    let j00 = q(&dfdx)?;
    let j01 = q(&|u| u * dfdx(u))?;
    let j11 = q(&|u| u * u * dfdx(u))?;
    Ok(([m0, m1], [[j00, j01], [j01, j11]]))
}

/// Levenberg–Marquardt on `G(a, b) = (∫f − 1, ∫ν̂f − ν̂_m)` from several starts,
/// the first being the linear solution. Returns the best point found.
pub fn solve_lagrange_exact_attempt(nu_m: f64, cfg: &QuadratureConfig) -> Result<ExactAttempt> {
    let (a0, b0) = lagrange_linear_ab(nu_m)?;
    let starts = [(a0, b0), (0.0, 0.0), (-1.0, 1.0 - 2.0 * nu_m), (a0 - 2.0, b0), (-5.0, -(nu_m - 0.5) * 10.0)];
    let norm = |r: [f64; 2]| fabs(r[0]).max(fabs(r[1]));
    let mut best = (a0, b0, f64::INFINITY);
    let mut iterations = 0;
    for (sa, sb) in starts {
        let (mut a, mut b) = (sa, sb);
        let mut lambda = 1e-3;
        let (m, mut jac) = moments_and_jacobian(a, b, cfg)?;
        let mut r = [m[0] - 1.0, m[1] - nu_m];
        for _ in 0..200 {
            iterations += 1;
            if norm(r) < best.2 {
                best = (a, b, norm(r));
            }
            if norm(r) <= 0.1 * EXACT_TOLERANCE {
                break;
            }
            // (JᵀJ + λ diag(JᵀJ)) δ = −Jᵀ r
            let jt_j = [
                [jac[0][0] * jac[0][0] + jac[1][0] * jac[1][0], jac[0][0] * jac[0][1] + jac[1][0] * jac[1][1]],
                [0.0, jac[0][1] * jac[0][1] + jac[1][1] * jac[1][1]],
            ];
            let g = [jac[0][0] * r[0] + jac[1][0] * r[1], jac[0][1] * r[0] + jac[1][1] * r[1]];
            let mut accepted = false;
            for _ in 0..30 {
                let h00 = jt_j[0][0] * (1.0 + lambda);
                let h11 = jt_j[1][1] * (1.0 + lambda);
                let h01 = jt_j[0][1];
                let det = h00 * h11 - h01 * h01;
                if det == 0.0 || !det.is_finite() {
                    lambda *= 10.0;
                    continue;
                }
                let da = -(h11 * g[0] - h01 * g[1]) / det;
                let db = -(h00 * g[1] - h01 * g[0]) / det;
                let (na, nb) = (a + da, b + db);
                let Ok((nm, nj)) = moments_and_jacobian(na, nb, cfg) else {
                    lambda *= 10.0;
                    continue;
                };
                let nr = [nm[0] - 1.0, nm[1] - nu_m];
                if nr[0] * nr[0] + nr[1] * nr[1] < r[0] * r[0] + r[1] * r[1] {
                    a = na;
                    b = nb;
                    r = nr;
                    jac = nj;
                    lambda = (lambda * 0.3).max(1e-12);
                    accepted = true;
                    break;
                }
                lambda *= 10.0;
            }
            if !accepted {
                break;
            }
        }
        if norm(r) < best.2 {
            best = (a, b, norm(r));
        }
        if best.2 <= EXACT_TOLERANCE {
            break;
        }
    }
    let pair = LagrangePair::from_multipliers(best.0, best.1, nu_m, Solver::NumericExact, cfg)?;
    let converged = pair.residual_norm() <= EXACT_TOLERANCE;
    Ok(ExactAttempt { best: pair, converged, iterations })
}

/// Exact solve; fails with [`Error::NonConvergence`] unless both residuals
/// reach [`EXACT_TOLERANCE`].
pub fn solve_lagrange_exact(nu_m: f64, cfg: &QuadratureConfig) -> Result<LagrangePair> {
    let t = solve_lagrange_exact_attempt(nu_m, cfg)?;
    if t.converged {
        Ok(t.best)
    } else {
        Err(Error::NonConvergence {
            what: "exact Lagrange multiplier solve",
            iterations: t.iterations,
            residual: t.best.residual_norm(),
        })
    }
}

/// Multipliers, spatial exponent and branch of the velocity law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityModel {
    pub lagrange: LagrangePair,
    pub k: f64,
    pub branch: Branch,
}

impl VelocityModel {
    pub fn new(lagrange: LagrangePair, k: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&k) {
            return Err(Error::Domain { func: "VelocityModel", detail: format!("k = {k} must lie in [0, 1]") });
        }
        if lagrange.b == 0.0 {
            return Err(Error::DegenerateMultiplier);
        }
        Ok(Self { lagrange, k, branch: Branch::MinusRoot })
    }
}

/// A predicted normalized velocity; never clamped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub nu_hat: f64,
    pub out_of_range: bool,
}

/// `ν̂ = (1/b)[−a ∓ √(a² − 2√2 b e^{1/2} (y/M)^k)]`, minus sign for
/// [`Branch::MinusRoot`].
pub fn predict_velocity(y_over_m: f64, model: &VelocityModel) -> Result<Prediction> {
    if !(0.0..=1.0).contains(&y_over_m) {
        return Err(Error::Domain { func: "predict_velocity", detail: format!("y/M = {y_over_m} must lie in [0, 1]") });
    }
    let (a, b) = (model.lagrange.a, model.lagrange.b);
    if b == 0.0 {
        return Err(Error::DegenerateMultiplier);
    }
    let rk = if model.k == 0.0 { 1.0 } else { pow(y_over_m, model.k) };
    let c = C0 * b * rk;
    let disc = a * a - c;
    if disc < 0.0 {
        return Err(Error::NegativeDiscriminant { discriminant: disc });
    }
    let s = sqrt(disc);
    // (−a ∓ s)/b, rewritten as c/(b(−a ± s)) when the direct form cancels.
    let nu_hat = match model.branch {
        Branch::MinusRoot if a <= 0.0 => {
            let d = -a + s;
            if d == 0.0 {
                0.0
            } else {
                c / (b * d)
            }
        }
        Branch::MinusRoot => (-a - s) / b,
        Branch::PlusRoot if a >= 0.0 => {
            let d = -a - s;
            if d == 0.0 {
                0.0
            } else {
                c / (b * d)
            }
        }
        Branch::PlusRoot => (-a + s) / b,
    };
    Ok(Prediction { nu_hat, out_of_range: !(0.0..=1.0).contains(&nu_hat) })
}

/// Entropy of the plus-root density at `α = 1/2`, and the same integral with
/// exponent one on `−ln f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxEntropyValue {
    pub half_order: f64,
    pub exponent_one: f64,
}

pub fn max_entropy_value(lag: &LagrangePair, cfg: &QuadratureConfig) -> Result<MaxEntropyValue> {
    let y = |u: f64| quadratic_root(lag.a + lag.b * u, Branch::PlusRoot);
    let half_order = integrate(|u| exp(-y(u)) * sqrt(y(u)), 0.0, 1.0, cfg)?.value;
    let exponent_one = integrate(|u| exp(-y(u)) * y(u), 0.0, 1.0, cfg)?.value;
    Ok(MaxEntropyValue { half_order, exponent_one })
}
