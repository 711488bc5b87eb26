//! Executable checks of the entropy bounds.
//!
//! Each check evaluates both sides numerically and compares them with a
//! tolerance of `1e-9` plus the quadrature error estimates. Checks whose
//! hypotheses fail are reported as [`Verdict::Skipped`] with a reason.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cell::Cell;

use libm::{exp, log, pow};

use crate::distributions::DistributionSpec;
use crate::fde::{fde_numeric, Alpha, Status};
use crate::quadrature::{integrate_with, QuadratureConfig};
use crate::Result;

/// Fixed part of the comparison tolerance.
pub const BASE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    Holds,
    Violated,
    Skipped(String),
}

/// The six bound families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundOp {
    ShannonPower,
    ExpLogSum,
    JensenSupport,
    Holder,
    TwoSided,
    Subadditive,
}

impl BoundOp {
    pub const ALL: [BoundOp; 6] = [
        BoundOp::ShannonPower,
        BoundOp::ExpLogSum,
        BoundOp::JensenSupport,
        BoundOp::Holder,
        BoundOp::TwoSided,
        BoundOp::Subadditive,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundOp::ShannonPower => "shannon_power",
            BoundOp::ExpLogSum => "exp_logsum",
            BoundOp::JensenSupport => "jensen_support",
            BoundOp::Holder => "holder",
            BoundOp::TwoSided => "two_sided",
            BoundOp::Subadditive => "subadditive",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|op| op.name() == s)
    }
}

/// One evaluated inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub spec: String,
    pub alpha: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`.
    pub slack: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

impl BoundCheck {
    fn compare(name: &'static str, spec: String, alpha: f64, lhs: f64, rhs: f64, err: f64) -> Self {
        let slack = rhs - lhs;
        let tolerance = BASE_TOLERANCE + err;
        let verdict = if slack >= -tolerance { Verdict::Holds } else { Verdict::Violated };
        Self { name, spec, alpha, lhs, rhs, slack, tolerance, verdict }
    }

    fn skipped(name: &'static str, spec: String, alpha: f64, reason: impl Into<String>) -> Self {
        Self {
            name,
            spec,
            alpha,
            lhs: f64::NAN,
            rhs: f64::NAN,
            slack: f64::NAN,
            tolerance: f64::NAN,
            verdict: Verdict::Skipped(reason.into()),
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Shared hypotheses: admissible density with unit mass, optionally bounded support.
fn hypotheses(spec: &DistributionSpec, bounded: bool) -> core::result::Result<(), String> {
    let d = spec.density_max();
    if !d.is_admissible() {
        return Err(format!("density maximum {} exceeds 1", d.f_max));
    }
    if spec.nominal_mass() != 1.0 {
        return Err(format!("density mass is {}, not 1", spec.nominal_mass()));
    }
    if bounded && !spec.support().is_bounded() {
        return Err("support is unbounded".to_string());
    }
    Ok(())
}

/// Entropy and Shannon entropy with their error estimates.
fn both_entropies(spec: &DistributionSpec, alpha: Alpha, cfg: &QuadratureConfig) -> Result<(f64, f64, f64, f64)> {
    let h = fde_numeric(spec, alpha, cfg)?;
    let s = fde_numeric(spec, Alpha::SHANNON, cfg)?;
    debug_assert!(h.status != Status::ComplexDomain);
    Ok((h.value, h.abs_error_estimate, s.value, s.abs_error_estimate))
}

/// Error in `x^α` propagated from an error `dx` in `x`.
fn pow_error(x: f64, dx: f64, alpha: f64) -> f64 {
    if x <= dx {
        pow(x + dx, alpha)
    } else {
        alpha * pow(x - dx, alpha - 1.0) * dx
    }
}

fn integrate_spec(spec: &DistributionSpec, g: impl Fn(f64) -> f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    let r = integrate_with(g, &spec.breakpoints(), spec.endpoint_exponents(), cfg)?;
    Ok((r.value, r.abs_error))
}

macro_rules! skip_on_err {
    ($e:expr, $name:expr, $text:expr, $alpha:expr) => {
        match $e {
            Ok(v) => v,
            Err(err) => return BoundCheck::skipped($name, $text, $alpha, format!("quadrature failed: {err}")),
        }
    };
}

/// `H^α ≤ (H_S)^α`.
pub fn bound_shannon_power(spec: &DistributionSpec, alpha: Alpha, cfg: &QuadratureConfig) -> BoundCheck {
    const NAME: &str = "shannon_power";
    let text = spec.to_text();
    let a = alpha.value();
    if let Err(r) = hypotheses(spec, false) {
        return BoundCheck::skipped(NAME, text, a, r);
    }
    let (h, he, hs, hse) = skip_on_err!(both_entropies(spec, alpha, cfg), NAME, text, a);
    if hs < 0.0 {
        return BoundCheck::skipped(NAME, text, a, format!("Shannon entropy {hs} is negative"));
    }
    BoundCheck::compare(NAME, text, a, h, pow(hs, a), he + pow_error(hs, hse, a))
}

/// `A(α)·e^{H_S} ≤ H^α` with `A(α) = exp ∫ f ln(f (−ln f)^α)`.
pub fn bound_exp_logsum(spec: &DistributionSpec, alpha: Alpha, cfg: &QuadratureConfig) -> BoundCheck {
    const NAME: &str = "exp_logsum";
    let text = spec.to_text();
    let a = alpha.value();
    if let Err(r) = hypotheses(spec, true) {
        return BoundCheck::skipped(NAME, text, a, r);
    }
    let g = |x: f64| {
        let lf = spec.ln_pdf_unchecked(x);
        if lf == f64::NEG_INFINITY {
            return 0.0;
        }
        let y = -lf;
        exp(lf) * (lf + a * log(y))
    };
    let (la, lae) = match integrate_spec(spec, g, cfg) {
        Ok(v) => v,
        Err(e) => return BoundCheck::skipped(NAME, text, a, format!("A(α) integral diverges: {e}")),
    };
    let (h, he, hs, hse) = skip_on_err!(both_entropies(spec, alpha, cfg), NAME, text, a);
    let lhs = exp(la + hs);
    BoundCheck::compare(NAME, text, a, lhs, h, he + lhs * (exp(lae + hse) - 1.0))
}

/// `H^α ≤ b^{1−α} (H_S)^α` on a support of length `b`.
pub fn bound_jensen_support(spec: &DistributionSpec, alpha: Alpha, cfg: &QuadratureConfig) -> BoundCheck {
    const NAME: &str = "jensen_support";
    let text = spec.to_text();
    let a = alpha.value();
    if let Err(r) = hypotheses(spec, true) {
        return BoundCheck::skipped(NAME, text, a, r);
    }
    let (h, he, hs, hse) = skip_on_err!(both_entropies(spec, alpha, cfg), NAME, text, a);
    if hs < 0.0 {
        return BoundCheck::skipped(NAME, text, a, format!("Shannon entropy {hs} is negative"));
    }
    let scale = pow(spec.support().width(), 1.0 - a);
    BoundCheck::compare(NAME, text, a, h, scale * pow(hs, a), he + scale * pow_error(hs, hse, a))
}

/// `H^α ≤ ∫ (−ln f)^α dx`.
pub fn bound_holder(spec: &DistributionSpec, alpha: Alpha, cfg: &QuadratureConfig) -> BoundCheck {
    const NAME: &str = "holder";
    let text = spec.to_text();
    let a = alpha.value();
    if let Err(r) = hypotheses(spec, true) {
        return BoundCheck::skipped(NAME, text, a, r);
    }
    let g = |x: f64| {
        let y = -spec.ln_pdf_unchecked(x);
        if y <= 0.0 {
            0.0
        } else {
            pow(y, a)
        }
    };
    let (rhs, re) = match integrate_spec(spec, g, cfg) {
        Ok(v) => v,
        Err(e) => return BoundCheck::skipped(NAME, text, a, format!("information-gain integral diverges: {e}")),
    };
    let h = skip_on_err!(fde_numeric(spec, alpha, cfg), NAME, text, a);
    BoundCheck::compare(NAME, text, a, h.value, rhs, h.abs_error_estimate + re)
}

/// `∫ f(1−f)^α ≤ H^α ≤ ∫ f(1/f − 1)^α` and `H^α ≤ b(α/e)^α`.
pub fn bound_two_sided(spec: &DistributionSpec, alpha: Alpha, cfg: &QuadratureConfig) -> Vec<BoundCheck> {
    let text = spec.to_text();
    let a = alpha.value();
    let names = ["two_sided_lower", "two_sided_upper", "two_sided_cap"];
    let skip_all = |r: String| names.iter().map(|n| BoundCheck::skipped(n, text.clone(), a, r.clone())).collect();
    if let Err(r) = hypotheses(spec, true) {
        return skip_all(r);
    }
    let h = match fde_numeric(spec, alpha, cfg) {
        Ok(h) => h,
        Err(e) => return skip_all(format!("quadrature failed: {e}")),
    };
    let lower = integrate_spec(
        spec,
        |x| {
            let f = exp(spec.ln_pdf_unchecked(x));
            f * pow((1.0 - f).max(0.0), a)
        },
        cfg,
    );
    let upper = integrate_spec(
        spec,
        |x| {
            let f = exp(spec.ln_pdf_unchecked(x));
            if f == 0.0 {
                0.0
            } else {
                pow(f, 1.0 - a) * pow((1.0 - f).max(0.0), a)
            }
        },
        cfg,
    );
    let mut out = Vec::with_capacity(3);
    out.push(match lower {
        Ok((v, e)) => BoundCheck::compare(names[0], text.clone(), a, v, h.value, e + h.abs_error_estimate),
        Err(e) => BoundCheck::skipped(names[0], text.clone(), a, format!("quadrature failed: {e}")),
    });
    out.push(match upper {
        Ok((v, e)) => BoundCheck::compare(names[1], text.clone(), a, h.value, v, e + h.abs_error_estimate),
        Err(e) => BoundCheck::skipped(names[1], text.clone(), a, format!("upper integrand diverges: {e}")),
    });
    let cap = spec.support().width() * pow(a / core::f64::consts::E, a);
    out.push(BoundCheck::compare(names[2], text, a, h.value, cap, h.abs_error_estimate));
    out
}

/// `H^α(f_X f_Y) ≤ H^α(f_X) + H^α(f_Y)` for independent `X`, `Y`.
pub fn bound_subadditive(
    x: &DistributionSpec,
    y: &DistributionSpec,
    alpha: Alpha,
    cfg: &QuadratureConfig,
) -> BoundCheck {
    const NAME: &str = "subadditive";
    let text = format!("{} * {}", x.to_text(), y.to_text());
    let a = alpha.value();
    if let Err(r) = hypotheses(x, false).and_then(|_| hypotheses(y, false)) {
        return BoundCheck::skipped(NAME, text, a, r);
    }
    let hx = skip_on_err!(fde_numeric(x, alpha, cfg), NAME, text, a);
    let hy = skip_on_err!(fde_numeric(y, alpha, cfg), NAME, text, a);
    // ∫∫ f_X f_Y (y_X + y_Y)^α with y = −ln f; the inner integral depends on x only through y_X.
    let inner_cfg = QuadratureConfig { rel_tol: cfg.rel_tol * 0.1, ..*cfg };
    let worst_inner = Cell::new(0.0f64);
    let outer = integrate_with(
        |s| {
            let lx = x.ln_pdf_unchecked(s);
            if lx == f64::NEG_INFINITY {
                return 0.0;
            }
            let yx = -lx;
            let inner = integrate_with(
                |t| {
                    let ly = y.ln_pdf_unchecked(t);
                    if ly == f64::NEG_INFINITY {
                        return 0.0;
                    }
                    let total = yx - ly;
                    exp(ly) * if a == 1.0 { total } else { pow(total.max(0.0), a) }
                },
                &y.breakpoints(),
                y.endpoint_exponents(),
                &inner_cfg,
            );
            match inner {
                Ok(r) => {
                    if r.abs_error > worst_inner.get() {
                        worst_inner.set(r.abs_error);
                    }
                    exp(lx) * r.value
                }
                Err(_) => f64::NAN,
            }
        },
        &x.breakpoints(),
        x.endpoint_exponents(),
        cfg,
    );
    let lhs = match outer {
        Ok(r) => r,
        Err(e) => return BoundCheck::skipped(NAME, text, a, format!("double quadrature failed: {e}")),
    };
    let err = lhs.abs_error + worst_inner.get() + hx.abs_error_estimate + hy.abs_error_estimate;
    BoundCheck::compare(NAME, text, a, lhs.value, hx.value + hy.value, err)
}

/// Run one bound family. `other` is the second factor for [`BoundOp::Subadditive`]
/// and ignored otherwise.
pub fn run_bound(
    op: BoundOp,
    spec: &DistributionSpec,
    other: &DistributionSpec,
    alpha: Alpha,
    cfg: &QuadratureConfig,
) -> Vec<BoundCheck> {
    match op {
        BoundOp::ShannonPower => alloc::vec![bound_shannon_power(spec, alpha, cfg)],
        BoundOp::ExpLogSum => alloc::vec![bound_exp_logsum(spec, alpha, cfg)],
        BoundOp::JensenSupport => alloc::vec![bound_jensen_support(spec, alpha, cfg)],
        BoundOp::Holder => alloc::vec![bound_holder(spec, alpha, cfg)],
        BoundOp::TwoSided => bound_two_sided(spec, alpha, cfg),
        BoundOp::Subadditive => alloc::vec![bound_subadditive(spec, other, alpha, cfg)],
    }
}

/// Aggregate counts over a set of checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SuiteSummary {
    pub holds: usize,
    pub violated: usize,
    pub skipped: usize,
}

impl SuiteSummary {
    pub fn of(checks: &[BoundCheck]) -> Self {
        let mut s = Self::default();
        for c in checks {
            match c.verdict {
                Verdict::Holds => s.holds += 1,
                Verdict::Violated => s.violated += 1,
                Verdict::Skipped(_) => s.skipped += 1,
            }
        }
        s
    }

    pub fn total(&self) -> usize {
        self.holds + self.violated + self.skipped
    }

    pub fn skipped_fraction(&self) -> f64 {
        if self.total() == 0 {
            0.0
        } else {
            self.skipped as f64 / self.total() as f64
        }
    }
}
