//! Distribution catalog: validated parameters, log-densities, supports and
//! density maxima.
//!
//! Specs have a textual form `family:key=value{,key=value}`, for example
//! `uniform:A=0,B=2` or `normal:mu=0,sigma=1,norm=full`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use libm::{erfc, exp, fabs, lgamma, log, log1p, pow, sqrt};

use crate::quadrature::{integrate_with, Endpoints, QuadratureConfig};
use crate::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// How half-line densities printed with a full-line normalizing constant are
/// treated. Only Normal and Cramér consult this flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum Normalization {
    /// Formula and support exactly as printed; total mass may be below one.
    #[default]
    AsPrinted,
    /// Printed support, density divided by its mass.
    Renormalized,
    /// Symmetric density over the whole real line.
    FullLine,
}

impl Normalization {
    pub fn as_str(self) -> &'static str {
        match self {
            Normalization::AsPrinted => "printed",
            Normalization::Renormalized => "renormalized",
            Normalization::FullLine => "full",
        }
    }
}

impl FromStr for Normalization {
    type Err = String;
    fn from_str(s: &str) -> core::result::Result<Self, String> {
        match s {
            "printed" | "as-printed" => Ok(Normalization::AsPrinted),
            "renormalized" | "renorm" => Ok(Normalization::Renormalized),
            "full" | "full-line" => Ok(Normalization::FullLine),
            _ => Err(format!("unknown normalization `{s}` (expected printed, renormalized or full)")),
        }
    }
}

/// Family together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Uniform {
        a: f64,
        b: f64,
    },
    Normal {
        mu: f64,
        sigma: f64,
        norm: Normalization,
    },
    Exponential {
        lambda: f64,
    },
    ParetoII {
        k: f64,
        sigma: f64,
    },
    /// Peak at `beta`; density `2x/β` on `[0, β]` and `2(1−x)/(1−β)` on `(β, 1]`.
    Triangular {
        beta: f64,
    },
    FoldedT {
        gamma: f64,
    },
    Cramer {
        theta: f64,
        norm: Normalization,
    },
    Cauchy {
        mu: f64,
        sigma: f64,
    },
    /// Rate `m`, shape `n`.
    Gamma {
        m: f64,
        n: f64,
    },
    Beta {
        m: f64,
        n: f64,
    },
    /// Scale `a`, shape `b`.
    Weibull {
        a: f64,
        b: f64,
    },
    GeneralizedPareto {
        k: f64,
        sigma: f64,
        theta: f64,
    },
    FiniteRange {
        a: f64,
        theta: f64,
    },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Uniform { .. } => "uniform",
            Family::Normal { .. } => "normal",
            Family::Exponential { .. } => "exponential",
            Family::ParetoII { .. } => "pareto2",
            Family::Triangular { .. } => "triangular",
            Family::FoldedT { .. } => "foldedt",
            Family::Cramer { .. } => "cramer",
            Family::Cauchy { .. } => "cauchy",
            Family::Gamma { .. } => "gamma",
            Family::Beta { .. } => "beta",
            Family::Weibull { .. } => "weibull",
            Family::GeneralizedPareto { .. } => "gpd",
            Family::FiniteRange { .. } => "finiterange",
        }
    }
}

/// Closed interval `[lo, hi]`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub lo: f64,
    pub hi: f64,
}

impl Support {
    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Admissibility {
    /// `sup f ≤ 1`: fractional powers of `−ln f` are real.
    Admissible,
    Inadmissible,
}

/// Supremum of the density and its classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityRange {
    pub f_max: f64,
    pub classification: Admissibility,
}

impl DensityRange {
    fn new(f_max: f64) -> Self {
        let classification = if f_max <= 1.0 { Admissibility::Admissible } else { Admissibility::Inadmissible };
        Self { f_max, classification }
    }
    pub fn is_admissible(&self) -> bool {
        self.classification == Admissibility::Admissible
    }
}

/// A validated distribution. Construction rejects invalid parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionSpec {
    family: Family,
}

fn invalid(family: &'static str, detail: impl Into<String>) -> Error {
    Error::InvalidParameter { family, detail: detail.into() }
}

fn positive(family: &'static str, name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(family, format!("{name} = {v} must be positive and finite")))
    }
}

/// `c · ln x` with the convention `0 · ln 0 = 0`.
fn xlogy(c: f64, x: f64) -> f64 {
    if c == 0.0 {
        0.0
    } else {
        c * log(x)
    }
}

fn ln_beta(m: f64, n: f64) -> f64 {
    lgamma(m) + lgamma(n) - lgamma(m + n)
}

/// Standard normal distribution function `Φ(z)`.
fn phi(z: f64) -> f64 {
    0.5 * erfc(-z / core::f64::consts::SQRT_2)
}

impl DistributionSpec {
    pub fn new(family: Family) -> Result<Self> {
        let name = family.name();
        match family {
            Family::Uniform { a, b } => {
                if !(a >= 0.0) || !b.is_finite() || !(b > a) {
                    return Err(invalid(name, format!("need 0 ≤ A < B < ∞, got A = {a}, B = {b}")));
                }
            }
            Family::Normal { mu, sigma, .. } => {
                if !(mu >= 0.0) || !mu.is_finite() {
                    return Err(invalid(name, format!("mu = {mu} must be nonnegative and finite")));
                }
                positive(name, "sigma", sigma)?;
            }
            Family::Exponential { lambda } => positive(name, "lambda", lambda)?,
            Family::ParetoII { k, sigma } => {
                positive(name, "k", k)?;
                positive(name, "sigma", sigma)?;
            }
            Family::Triangular { beta } => {
                if !(beta > 0.0 && beta <= 1.0) {
                    return Err(invalid(name, format!("beta = {beta} must lie in (0, 1]")));
                }
            }
            Family::FoldedT { gamma } => positive(name, "gamma", gamma)?,
            Family::Cramer { theta, .. } => positive(name, "theta", theta)?,
            Family::Cauchy { mu, sigma } => {
                if !(mu >= 0.0) || !mu.is_finite() {
                    return Err(invalid(name, format!("mu = {mu} must be nonnegative and finite")));
                }
                positive(name, "sigma", sigma)?;
            }
            Family::Gamma { m, n } | Family::Beta { m, n } => {
                positive(name, "m", m)?;
                positive(name, "n", n)?;
            }
            Family::Weibull { a, b } => {
                positive(name, "a", a)?;
                positive(name, "b", b)?;
            }
            Family::GeneralizedPareto { k, sigma, theta } => {
                positive(name, "k", k)?;
                positive(name, "sigma", sigma)?;
                if !theta.is_finite() {
                    return Err(invalid(name, "theta must be finite"));
                }
            }
            Family::FiniteRange { a, theta } => {
                positive(name, "a", a)?;
                positive(name, "theta", theta)?;
            }
        }
        Ok(Self { family })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn support(&self) -> Support {
        let inf = f64::INFINITY;
        let (lo, hi) = match self.family {
            Family::Uniform { a, b } => (a, b),
            Family::Normal { norm: Normalization::FullLine, .. } => (-inf, inf),
            Family::Normal { .. } => (0.0, inf),
            Family::Exponential { .. } | Family::ParetoII { .. } | Family::FoldedT { .. } => (0.0, inf),
            Family::Gamma { .. } | Family::Weibull { .. } => (0.0, inf),
            Family::Triangular { .. } | Family::Beta { .. } => (0.0, 1.0),
            Family::Cramer { norm: Normalization::FullLine, .. } => (-inf, inf),
            Family::Cramer { .. } => (0.0, inf),
            Family::Cauchy { .. } => (-inf, inf),
            Family::GeneralizedPareto { theta, .. } => (theta, inf),
            Family::FiniteRange { theta, .. } => (0.0, theta),
        };
        Support { lo, hi }
    }

    /// Total probability mass implied by the formula on its support.
    pub fn nominal_mass(&self) -> f64 {
        match self.family {
            Family::Normal { mu, sigma, norm: Normalization::AsPrinted } => phi(mu / sigma),
            Family::Cramer { norm: Normalization::AsPrinted, .. } => 0.5,
            _ => 1.0,
        }
    }

    /// `ln f(x)` without the support check. Returns `-inf` where `f = 0`.
    pub fn ln_pdf_unchecked(&self, x: f64) -> f64 {
        match self.family {
            Family::Uniform { a, b } => -log(b - a),
            Family::Normal { mu, sigma, norm } => {
                let z = (x - mu) / sigma;
                let base = -LN_SQRT_2PI - log(sigma) - 0.5 * z * z;
                if norm == Normalization::Renormalized {
                    base - log(phi(mu / sigma))
                } else {
                    base
                }
            }
            Family::Exponential { lambda } => log(lambda) - lambda * x,
            Family::ParetoII { k, sigma } => sigma * log(k) + log(sigma) - (sigma + 1.0) * log(x + k),
            Family::Triangular { beta } => {
                if x <= beta {
                    log(2.0 * x / beta)
                } else {
                    log(2.0 * (1.0 - x) / (1.0 - beta))
                }
            }
            Family::FoldedT { gamma } => folded_t_ln_peak(gamma) - 0.5 * (gamma + 1.0) * log1p(x * x / gamma),
            Family::Cramer { theta, norm } => {
                let base = log(theta) - 2.0 * log1p(theta * fabs(x));
                if norm == Normalization::Renormalized {
                    base
                } else {
                    base - core::f64::consts::LN_2
                }
            }
            Family::Cauchy { mu, sigma } => {
                let z = (x - mu) / sigma;
                -log(core::f64::consts::PI * sigma) - log1p(z * z)
            }
            Family::Gamma { m, n } => n * log(m) + xlogy(n - 1.0, x) - m * x - lgamma(n),
            Family::Beta { m, n } => {
                xlogy(m - 1.0, x) + (if n == 1.0 { 0.0 } else { (n - 1.0) * log1p(-x) }) - ln_beta(m, n)
            }
            Family::Weibull { a, b } => log(b / a) + xlogy(b - 1.0, x / a) - pow(x / a, b),
            Family::GeneralizedPareto { k, sigma, theta } => {
                -log(sigma) - (1.0 + 1.0 / k) * log1p(k * (x - theta) / sigma)
            }
            Family::FiniteRange { a, theta } => log(a) + xlogy(a - 1.0, x) - a * log(theta),
        }
    }

    pub fn ln_pdf(&self, x: f64) -> Result<f64> {
        let s = self.support();
        if !s.contains(x) {
            return Err(Error::OutsideSupport { x, lo: s.lo, hi: s.hi });
        }
        Ok(self.ln_pdf_unchecked(x))
    }

    /// Density at `x`, as printed for the chosen normalization.
    pub fn pdf(&self, x: f64) -> Result<f64> {
        self.ln_pdf(x).map(exp)
    }

    /// Location of the density supremum, if it is attained at a finite point.
    pub fn mode(&self) -> Option<f64> {
        match self.family {
            Family::Uniform { a, .. } => Some(a),
            Family::Normal { mu, norm, .. } => Some(if norm == Normalization::FullLine { mu } else { mu.max(0.0) }),
            Family::Exponential { .. } | Family::ParetoII { .. } | Family::FoldedT { .. } => Some(0.0),
            Family::Cramer { .. } => Some(0.0),
            Family::Triangular { beta } => Some(beta),
            Family::Cauchy { mu, .. } => Some(mu),
            Family::Gamma { m, n } => {
                if n < 1.0 {
                    None
                } else {
                    Some((n - 1.0) / m)
                }
            }
            Family::Beta { m, n } => {
                if m < 1.0 || n < 1.0 {
                    None
                } else if m == 1.0 {
                    Some(0.0)
                } else if n == 1.0 {
                    Some(1.0)
                } else {
                    Some((m - 1.0) / (m + n - 2.0))
                }
            }
            Family::Weibull { a, b } => {
                if b < 1.0 {
                    None
                } else {
                    Some(a * pow((b - 1.0) / b, 1.0 / b))
                }
            }
            Family::GeneralizedPareto { theta, .. } => Some(theta),
            Family::FiniteRange { a, theta } => {
                if a < 1.0 {
                    None
                } else if a == 1.0 {
                    Some(0.0)
                } else {
                    Some(theta)
                }
            }
        }
    }

    /// Supremum of the density over the support, from the analytic mode.
    pub fn density_max(&self) -> DensityRange {
        match self.mode() {
            Some(x) => DensityRange::new(exp(self.ln_pdf_unchecked(x))),
            None => DensityRange::new(f64::INFINITY),
        }
    }

    /// Supremum estimated by a grid scan refined with golden-section search.
    /// Independent of [`Self::mode`]; used to cross-check it.
    pub fn density_max_grid(&self) -> f64 {
        let s = self.support();
        let (lo, hi) = window(self, s);
        const N: usize = 4000;
        let h = (hi - lo) / N as f64;
        let lnf = |x: f64| if s.contains(x) { self.ln_pdf_unchecked(x) } else { f64::NEG_INFINITY };
        let mut best = 0;
        let mut best_v = f64::NEG_INFINITY;
        for i in 0..=N {
            let v = lnf(lo + h * i as f64);
            if v > best_v {
                best_v = v;
                best = i;
            }
        }
        if best_v == f64::INFINITY {
            return f64::INFINITY;
        }
        let mut a = lo + h * best.saturating_sub(1) as f64;
        let mut b = (lo + h * (best + 1) as f64).min(hi);
        let g = 0.5 * (sqrt(5.0) - 1.0);
        for _ in 0..200 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if lnf(c) >= lnf(d) {
                b = d;
            } else {
                a = c;
            }
            if b - a < 1e-15 * (1.0 + fabs(a)) {
                break;
            }
        }
        let candidates = [a, b, 0.5 * (a + b), lo + h * best as f64];
        let m = candidates.iter().map(|&x| lnf(x)).fold(f64::NEG_INFINITY, f64::max);
        exp(m)
    }

    /// Support endpoints plus interior points where the density has a kink or peak.
    pub fn breakpoints(&self) -> Vec<f64> {
        let s = self.support();
        let mut pts = alloc::vec![s.lo];
        let interior = match self.family {
            Family::Normal { mu, .. } | Family::Cauchy { mu, .. } => Some(mu),
            Family::Cramer { norm: Normalization::FullLine, .. } => Some(0.0),
            _ => self.mode(),
        };
        if let Some(m) = interior {
            if m > s.lo && m < s.hi {
                pts.push(m);
            }
        }
        pts.push(s.hi);
        pts
    }

    /// Power-law exponents of the density at finite support endpoints where it is unbounded.
    pub fn endpoint_exponents(&self) -> Endpoints {
        let below = |p: f64| if p < 0.0 { Some(p) } else { None };
        match self.family {
            Family::Gamma { n, .. } => Endpoints { left: below(n - 1.0), right: None },
            Family::Weibull { b, .. } => Endpoints { left: below(b - 1.0), right: None },
            Family::FiniteRange { a, .. } => Endpoints { left: below(a - 1.0), right: None },
            Family::Beta { m, n } => Endpoints { left: below(m - 1.0), right: below(n - 1.0) },
            _ => Endpoints::default(),
        }
    }

    /// `∫_{lo}^{x} f` by adaptive quadrature.
    pub fn cdf_numeric(&self, x: f64, cfg: &QuadratureConfig) -> Result<f64> {
        let s = self.support();
        if !s.contains(x) {
            return Err(Error::OutsideSupport { x, lo: s.lo, hi: s.hi });
        }
        if x == s.lo {
            return Ok(0.0);
        }
        let mut pts: Vec<f64> = self.breakpoints().into_iter().filter(|&p| p < x).collect();
        pts.push(x);
        let mut ends = self.endpoint_exponents();
        if x < s.hi {
            ends.right = None;
        }
        let r = integrate_with(|t| exp(self.ln_pdf_unchecked(t)), &pts, ends, cfg)?;
        Ok(r.value.clamp(0.0, 1.0))
    }

    /// `∫ f` over the support by adaptive quadrature.
    pub fn mass_numeric(&self, cfg: &QuadratureConfig) -> Result<f64> {
        let r = integrate_with(|t| exp(self.ln_pdf_unchecked(t)), &self.breakpoints(), self.endpoint_exponents(), cfg)?;
        Ok(r.value)
    }

    /// Canonical text form, parseable by [`FromStr`].
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn folded_t_ln_peak(gamma: f64) -> f64 {
    core::f64::consts::LN_2 - 0.5 * log(gamma) - ln_beta(0.5 * gamma, 0.5)
}

/// A finite window containing the bulk of the density, for grid scans.
fn window(spec: &DistributionSpec, s: Support) -> (f64, f64) {
    let centre = match spec.family {
        Family::Normal { mu, .. } | Family::Cauchy { mu, .. } => mu,
        _ => spec.mode().unwrap_or(if s.lo.is_finite() { s.lo } else { 0.0 }),
    };
    let scale = match spec.family {
        Family::Normal { sigma, .. } | Family::Cauchy { sigma, .. } => 10.0 * sigma,
        Family::Exponential { lambda } => 10.0 / lambda,
        Family::ParetoII { k, .. } => 10.0 * k,
        Family::Cramer { theta, .. } => 10.0 / theta,
        Family::Gamma { m, n } => 10.0 * (n + 1.0) / m,
        Family::Weibull { a, .. } => 10.0 * a,
        Family::GeneralizedPareto { sigma, .. } => 10.0 * sigma,
        _ => 1.0,
    };
    let lo = if s.lo.is_finite() { s.lo } else { centre - scale };
    let hi = if s.hi.is_finite() { s.hi } else { centre.max(lo) + scale };
    (lo, hi)
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.family.name();
        match self.family {
            Family::Uniform { a, b } => write!(f, "{name}:A={a},B={b}"),
            Family::Normal { mu, sigma, norm } => write!(f, "{name}:mu={mu},sigma={sigma},norm={}", norm.as_str()),
            Family::Exponential { lambda } => write!(f, "{name}:lambda={lambda}"),
            Family::ParetoII { k, sigma } => write!(f, "{name}:k={k},sigma={sigma}"),
            Family::Triangular { beta } => write!(f, "{name}:beta={beta}"),
            Family::FoldedT { gamma } => write!(f, "{name}:gamma={gamma}"),
            Family::Cramer { theta, norm } => write!(f, "{name}:theta={theta},norm={}", norm.as_str()),
            Family::Cauchy { mu, sigma } => write!(f, "{name}:mu={mu},sigma={sigma}"),
            Family::Gamma { m, n } | Family::Beta { m, n } => write!(f, "{name}:m={m},n={n}"),
            Family::Weibull { a, b } => write!(f, "{name}:a={a},b={b}"),
            Family::GeneralizedPareto { k, sigma, theta } => write!(f, "{name}:k={k},sigma={sigma},theta={theta}"),
            Family::FiniteRange { a, theta } => write!(f, "{name}:a={a},theta={theta}"),
        }
    }
}

struct Params<'a> {
    text: &'a str,
    pairs: Vec<(&'a str, &'a str)>,
    used: Vec<bool>,
}

impl<'a> Params<'a> {
    fn err(&self, detail: impl Into<String>) -> Error {
        Error::Parse { text: self.text.to_string(), detail: detail.into() }
    }

    fn raw(&mut self, keys: &[&str]) -> Option<&'a str> {
        for (i, (k, v)) in self.pairs.iter().enumerate() {
            if keys.contains(k) {
                self.used[i] = true;
                return Some(v);
            }
        }
        None
    }

    fn num(&mut self, keys: &[&str]) -> Result<f64> {
        let v = self.raw(keys).ok_or_else(|| self.err(format!("missing parameter `{}`", keys[0])))?;
        v.trim().parse::<f64>().map_err(|_| self.err(format!("`{}` is not a number: `{v}`", keys[0])))
    }

    fn norm(&mut self) -> Result<Normalization> {
        match self.raw(&["norm", "normalization"]) {
            None => Ok(Normalization::default()),
            Some(v) => v.trim().parse().map_err(|e: String| self.err(e)),
        }
    }

    fn finish(self) -> Result<()> {
        for (i, (k, _)) in self.pairs.iter().enumerate() {
            if !self.used[i] {
                return Err(self.err(format!("unknown parameter `{k}`")));
            }
        }
        Ok(())
    }
}

impl FromStr for DistributionSpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let perr = |d: &str| Error::Parse { text: text.to_string(), detail: d.to_string() };
        let (name, rest) = text.trim().split_once(':').unwrap_or((text.trim(), ""));
        let mut pairs = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| perr("expected key=value"))?;
            let k = k.trim();
            if pairs.iter().any(|(seen, _)| *seen == k) {
                return Err(perr(&format!("duplicate parameter `{k}`")));
            }
            pairs.push((k, v.trim()));
        }
        let used = alloc::vec![false; pairs.len()];
        let mut p = Params { text, pairs, used };
        let family = match name.trim().to_ascii_lowercase().as_str() {
            "uniform" => Family::Uniform { a: p.num(&["A", "a"])?, b: p.num(&["B", "b"])? },
            "normal" => Family::Normal { mu: p.num(&["mu"])?, sigma: p.num(&["sigma"])?, norm: p.norm()? },
            "exponential" | "exp" => Family::Exponential { lambda: p.num(&["lambda"])? },
            "pareto2" | "paretoii" => Family::ParetoII { k: p.num(&["k"])?, sigma: p.num(&["sigma"])? },
            "triangular" => Family::Triangular { beta: p.num(&["beta"])? },
            "foldedt" | "folded-t" => Family::FoldedT { gamma: p.num(&["gamma"])? },
            "cramer" => Family::Cramer { theta: p.num(&["theta"])?, norm: p.norm()? },
            "cauchy" => Family::Cauchy { mu: p.num(&["mu"])?, sigma: p.num(&["sigma"])? },
            "gamma" => Family::Gamma { m: p.num(&["m"])?, n: p.num(&["n"])? },
            "beta" => Family::Beta { m: p.num(&["m"])?, n: p.num(&["n"])? },
            "weibull" => Family::Weibull { a: p.num(&["a"])?, b: p.num(&["b"])? },
            "gpd" | "generalizedpareto" => {
                Family::GeneralizedPareto { k: p.num(&["k"])?, sigma: p.num(&["sigma"])?, theta: p.num(&["theta"])? }
            }
            "finiterange" | "finite-range" => Family::FiniteRange { a: p.num(&["a", "p"])?, theta: p.num(&["theta"])? },
            other => return Err(perr(&format!("unknown family `{other}`"))),
        };
        p.finish()?;
        DistributionSpec::new(family)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(s: &str) -> DistributionSpec {
        s.parse().unwrap()
    }

    #[test]
    fn pdf_examples() {
        assert_eq!(spec("uniform:A=0,B=2").pdf(1.0).unwrap(), 0.5);
        assert_eq!(spec("exponential:lambda=1").pdf(0.0).unwrap(), 1.0);
        assert!(fabs(spec("cramer:theta=1").pdf(0.0).unwrap() - 0.5) < 1e-16);
        assert!(matches!(spec("uniform:A=0,B=2").pdf(3.0), Err(Error::OutsideSupport { .. })));
    }

    #[test]
    fn density_max_examples() {
        let d = spec("uniform:A=0,B=2").density_max();
        assert_eq!(d.f_max, 0.5);
        assert!(d.is_admissible());
        let d = spec("uniform:A=0,B=0.5").density_max();
        assert_eq!(d.f_max, 2.0);
        assert!(!d.is_admissible());
        let w = spec("weibull:a=1,b=2").density_max().f_max;
        assert!(fabs(w - sqrt(2.0) * exp(-0.5)) < 1e-15);
        assert!(spec("beta:m=0.5,n=2").density_max().f_max.is_infinite());
    }

    #[test]
    fn grid_fallback_agrees_with_modes() {
        for s in [
            "weibull:a=1,b=2",
            "gamma:m=0.5,n=2.5",
            "beta:m=2,n=3",
            "normal:mu=1,sigma=2",
            "cauchy:mu=0.3,sigma=1",
            "pareto2:k=2,sigma=1",
            "finiterange:a=2,theta=10",
            "triangular:beta=0.3",
        ] {
            let d = spec(s);
            let a = d.density_max().f_max;
            let g = d.density_max_grid();
            assert!(fabs(a - g) <= 1e-8 * a.max(1.0), "{s}: {a} vs {g}");
        }
    }

    #[test]
    fn cdf_examples() {
        let cfg = QuadratureConfig::default();
        let e = spec("exponential:lambda=1");
        for x in [0.1, 1.0, 5.0] {
            assert!(fabs(e.cdf_numeric(x, &cfg).unwrap() - (1.0 - exp(-x))) < 1e-12);
        }
        assert!(fabs(spec("uniform:A=0,B=2").cdf_numeric(1.0, &cfg).unwrap() - 0.5) < 1e-14);
        assert!(fabs(spec("pareto2:k=1,sigma=1").cdf_numeric(1.0, &cfg).unwrap() - 0.5) < 1e-12);
    }

    #[test]
    fn masses() {
        let cfg = QuadratureConfig::default();
        for s in [
            "uniform:A=1,B=3",
            "normal:mu=0.5,sigma=1,norm=full",
            "normal:mu=0.5,sigma=1,norm=renormalized",
            "exponential:lambda=0.3",
            "pareto2:k=1,sigma=2",
            "triangular:beta=0.3",
            "foldedt:gamma=3",
            "cramer:theta=2,norm=full",
            "cramer:theta=2,norm=renormalized",
            "cauchy:mu=1,sigma=2",
            "gamma:m=2,n=0.5",
            "beta:m=0.5,n=0.7",
            "weibull:a=1,b=0.8",
            "gpd:k=1,sigma=2,theta=2",
            "finiterange:a=0.5,theta=3",
        ] {
            let d = spec(s);
            let m = d.mass_numeric(&cfg).expect(s);
            assert!(fabs(m - 1.0) < 1e-9, "{s}: {m}");
            assert_eq!(d.nominal_mass(), 1.0);
        }
        let half = spec("cramer:theta=3");
        assert!(fabs(half.mass_numeric(&cfg).unwrap() - 0.5) < 1e-9);
        let n = spec("normal:mu=0,sigma=1");
        assert!(fabs(n.mass_numeric(&cfg).unwrap() - n.nominal_mass()) < 1e-10);
    }

    #[test]
    fn parse_round_trip_and_errors() {
        for s in
            ["uniform:A=0,B=2", "gpd:k=1,sigma=2,theta=2", "normal:mu=0,sigma=1,norm=full", "finiterange:a=2,theta=10"]
        {
            assert_eq!(spec(s).to_text(), s);
        }
        assert_eq!(spec("finiterange:p=2,theta=10"), spec("finiterange:a=2,theta=10"));
        assert!(matches!("uniform:A=0".parse::<DistributionSpec>(), Err(Error::Parse { .. })));
        assert!(matches!("uniform:A=0,B=2,C=3".parse::<DistributionSpec>(), Err(Error::Parse { .. })));
        assert!(matches!("zeta:s=2".parse::<DistributionSpec>(), Err(Error::Parse { .. })));
        assert!(matches!("uniform:A=2,B=1".parse::<DistributionSpec>(), Err(Error::InvalidParameter { .. })));
        assert!(matches!("pareto2:k=0,sigma=1".parse::<DistributionSpec>(), Err(Error::InvalidParameter { .. })));
    }
}
