//! Fitting the spatial exponent `k` to measured velocity profiles and scoring
//! the fitted law.

use alloc::format;
use alloc::vec::Vec;

use libm::{fabs, pow, sqrt};

use crate::quadrature::QuadratureConfig;
use crate::velocity::{
    cdf_quadrature, cdf_truncated, predict_velocity, solve_lagrange_exact, solve_lagrange_linear, LagrangePair,
    VelocityModel,
};
use crate::{Error, Result};

/// One measured point: relative height and normalized velocity, both in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub y_over_m: f64,
    pub nu_hat: f64,
}

/// A validated profile sorted by height.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    samples: Vec<ProfileSample>,
}

impl Profile {
    /// Validates ranges and duplicate heights, then sorts by height.
    pub fn new(mut samples: Vec<ProfileSample>) -> Result<Self> {
        for (i, s) in samples.iter().enumerate() {
            if !(0.0..=1.0).contains(&s.y_over_m) {
                return Err(Error::InvalidSample(format!("sample {i}: y/M = {} outside [0, 1]", s.y_over_m)));
            }
            if !(0.0..=1.0).contains(&s.nu_hat) {
                return Err(Error::InvalidSample(format!("sample {i}: ν̂ = {} outside [0, 1]", s.nu_hat)));
            }
        }
        samples.sort_by(|a, b| a.y_over_m.total_cmp(&b.y_over_m));
        if let Some(w) = samples.windows(2).find(|w| w[0].y_over_m == w[1].y_over_m) {
            return Err(Error::InvalidSample(format!("duplicate height y/M = {}", w[0].y_over_m)));
        }
        if samples.len() < 2 {
            return Err(Error::InsufficientData { needed: 2, got: samples.len() });
        }
        Ok(Self { samples })
    }

    pub fn samples(&self) -> &[ProfileSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Trapezoidal mean over `[0, 1]`. Missing end points are filled with
    /// `ν̂ = 0` at the bed and `ν̂ = 1` at the surface.
    pub fn mean_trapezoidal(&self) -> f64 {
        let mut pts: Vec<(f64, f64)> = Vec::with_capacity(self.samples.len() + 2);
        if self.samples[0].y_over_m > 0.0 {
            pts.push((0.0, 0.0));
        }
        pts.extend(self.samples.iter().map(|s| (s.y_over_m, s.nu_hat)));
        if self.samples[self.samples.len() - 1].y_over_m < 1.0 {
            pts.push((1.0, 1.0));
        }
        pts.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum()
    }

    pub fn mean_arithmetic(&self) -> f64 {
        self.samples.iter().map(|s| s.nu_hat).sum::<f64>() / self.samples.len() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum MeanEstimator {
    #[default]
    Trapezoidal,
    Arithmetic,
    Explicit(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CdfModel {
    /// The closed two-term form, exactly inverted by the velocity law.
    #[default]
    Truncated,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LagrangeSolver {
    #[default]
    Linear,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FitOptions {
    pub mean: MeanEstimator,
    pub cdf: CdfModel,
    pub solver: LagrangeSolver,
    pub quadrature: QuadratureConfig,
}

/// Where the fitted `k` sits relative to `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KBoundary {
    Interior,
    /// Optimum at `k = 0` with the objective still falling toward negative `k`.
    PinnedLow,
    /// Optimum at `k = 1` with the objective still falling beyond one.
    PinnedHigh,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KFit {
    pub k: f64,
    pub sse: f64,
    pub boundary: KBoundary,
}

fn powk(r: f64, k: f64) -> f64 {
    if k == 0.0 {
        1.0
    } else {
        pow(r, k)
    }
}

fn sse_at(k: f64, pts: &[(f64, f64)]) -> f64 {
    pts.iter().map(|&(r, f)| sq(f - powk(r, k))).sum()
}

fn sq(x: f64) -> f64 {
    x * x
}

/// CDF values `F(ν̂_i)` under the chosen model.
pub fn cdf_values(profile: &Profile, lag: &LagrangePair, model: CdfModel, cfg: &QuadratureConfig) -> Result<Vec<f64>> {
    profile
        .samples()
        .iter()
        .map(|s| match model {
            CdfModel::Truncated => cdf_truncated(s.nu_hat, lag),
            CdfModel::Quadrature => cdf_quadrature(s.nu_hat, lag, cfg),
        })
        .collect()
}

/// Least squares `k ∈ [0, 1]` for `F(ν̂_i) ≈ (y_i/M)^k`.
///
/// A 201-point scan locates the basin, then golden-section search refines it.
pub fn fit_k(profile: &Profile, lag: &LagrangePair, model: CdfModel, cfg: &QuadratureConfig) -> Result<KFit> {
    if profile.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, got: profile.len() });
    }
    let cdf = cdf_values(profile, lag, model, cfg)?;
    let first = cdf[0];
    if cdf.iter().all(|&c| c == first) {
        return Err(Error::NoFit);
    }
    let pts: Vec<(f64, f64)> = profile.samples().iter().zip(&cdf).map(|(s, &c)| (s.y_over_m, c)).collect();
    const N: usize = 200;
    let mut best = 0;
    let mut best_v = f64::INFINITY;
    for i in 0..=N {
        let v = sse_at(i as f64 / N as f64, &pts);
        if v < best_v {
            best_v = v;
            best = i;
        }
    }
    let mut lo = best.saturating_sub(1) as f64 / N as f64;
    let mut hi = (best + 1).min(N) as f64 / N as f64;
    let g = 0.5 * (sqrt(5.0) - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (sse_at(x1, &pts), sse_at(x2, &pts));
    while hi - lo > 1e-13 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = sse_at(x1, &pts);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = sse_at(x2, &pts);
        }
    }
    let mut k = 0.5 * (lo + hi);
    let mut sse = sse_at(k, &pts);
    for edge in [0.0, 1.0] {
        let v = sse_at(edge, &pts);
        if v < sse {
            k = edge;
            sse = v;
        }
    }
    let h = 1e-6;
    let boundary = if k <= h && sse_at(h, &pts) > sse && slope_at(0.0, &pts) > 0.0 {
        KBoundary::PinnedLow
    } else if k >= 1.0 - h && slope_at(1.0, &pts) < 0.0 {
        KBoundary::PinnedHigh
    } else {
        KBoundary::Interior
    };
    Ok(KFit { k, sse, boundary })
}

/// `d SSE/dk`, with `d r^k/dk = r^k ln r` (zero at `r = 0`).
fn slope_at(k: f64, pts: &[(f64, f64)]) -> f64 {
    pts.iter()
        .map(|&(r, f)| {
            if r == 0.0 {
                return 0.0;
            }
            let rk = powk(r, k);
            -2.0 * (f - rk) * rk * libm::log(r)
        })
        .sum()
}

/// `1 − Σ(o − c)²/Σ(o − ō)²`.
pub fn r_squared(observed: &[f64], computed: &[f64]) -> Result<f64> {
    check_pair(observed, computed, 2)?;
    let mean = observed.iter().sum::<f64>() / observed.len() as f64;
    let ss_tot: f64 = observed.iter().map(|o| sq(o - mean)).sum();
    if ss_tot == 0.0 {
        return Err(Error::DegenerateVariance);
    }
    let ss_res: f64 = observed.iter().zip(computed).map(|(o, c)| sq(o - c)).sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// Mean of `|o − c|/|o|`.
pub fn mrae(observed: &[f64], computed: &[f64]) -> Result<f64> {
    check_pair(observed, computed, 1)?;
    if let Some(index) = observed.iter().position(|&o| o == 0.0) {
        return Err(Error::ZeroObserved { index });
    }
    Ok(observed.iter().zip(computed).map(|(o, c)| fabs(o - c) / fabs(*o)).sum::<f64>() / observed.len() as f64)
}

pub fn rmse(observed: &[f64], computed: &[f64]) -> Result<f64> {
    check_pair(observed, computed, 1)?;
    Ok(sqrt(observed.iter().zip(computed).map(|(o, c)| sq(o - c)).sum::<f64>() / observed.len() as f64))
}

fn check_pair(o: &[f64], c: &[f64], needed: usize) -> Result<()> {
    if o.len() != c.len() {
        return Err(Error::LengthMismatch(o.len(), c.len()));
    }
    if o.len() < needed {
        return Err(Error::InsufficientData { needed, got: o.len() });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResult {
    pub y_over_m: f64,
    pub observed: f64,
    pub computed: f64,
    pub out_of_range: bool,
}

impl PointResult {
    pub fn residual(&self) -> f64 {
        self.observed - self.computed
    }
}

/// Outcome of fitting and scoring one profile.
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub nu_m: f64,
    pub nu_m_trapezoidal: f64,
    pub nu_m_arithmetic: f64,
    pub lagrange: LagrangePair,
    pub fit: KFit,
    pub r2: f64,
    /// Over samples with `ν̂ > 0`.
    pub mrae: f64,
    /// Over samples with `ν̂ > 0`.
    pub rmse: f64,
    pub n_points: usize,
    pub excluded_bed_points: usize,
    pub points: Vec<PointResult>,
}

impl FitReport {
    pub fn k(&self) -> f64 {
        self.fit.k
    }

    pub fn out_of_range_count(&self) -> usize {
        self.points.iter().filter(|p| p.out_of_range).count()
    }
}

/// Estimate `ν̂_m`, solve the multipliers, fit `k`, predict and score.
pub fn run_validation(profile: &Profile, opts: &FitOptions) -> Result<FitReport> {
    if profile.len() < 4 {
        return Err(Error::InsufficientData { needed: 4, got: profile.len() });
    }
    let nu_m_trapezoidal = profile.mean_trapezoidal();
    let nu_m_arithmetic = profile.mean_arithmetic();
    let nu_m = match opts.mean {
        MeanEstimator::Trapezoidal => nu_m_trapezoidal,
        MeanEstimator::Arithmetic => nu_m_arithmetic,
        MeanEstimator::Explicit(v) => v,
    };
    let lagrange = match opts.solver {
        LagrangeSolver::Linear => solve_lagrange_linear(nu_m, &opts.quadrature)?,
        LagrangeSolver::Exact => solve_lagrange_exact(nu_m, &opts.quadrature)?,
    };
    let fit = fit_k(profile, &lagrange, opts.cdf, &opts.quadrature)?;
    let model = VelocityModel::new(lagrange, fit.k)?;
    let mut points = Vec::with_capacity(profile.len());
    for s in profile.samples() {
        let p = predict_velocity(s.y_over_m, &model)?;
        points.push(PointResult {
            y_over_m: s.y_over_m,
            observed: s.nu_hat,
            computed: p.nu_hat,
            out_of_range: p.out_of_range,
        });
    }
    let obs: Vec<f64> = points.iter().map(|p| p.observed).collect();
    let cmp: Vec<f64> = points.iter().map(|p| p.computed).collect();
    let r2 = r_squared(&obs, &cmp)?;
    let (o_nz, c_nz): (Vec<f64>, Vec<f64>) =
        points.iter().filter(|p| p.observed != 0.0).map(|p| (p.observed, p.computed)).unzip();
    let excluded_bed_points = points.len() - o_nz.len();
    let mrae = mrae(&o_nz, &c_nz)?;
    let rmse = rmse(&o_nz, &c_nz)?;
    Ok(FitReport {
        nu_m,
        nu_m_trapezoidal,
        nu_m_arithmetic,
        lagrange,
        fit,
        r2,
        mrae,
        rmse,
        n_points: points.len(),
        excluded_bed_points,
        points,
    })
}
