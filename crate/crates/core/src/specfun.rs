//! Real-valued special functions used by the closed-form entropy expressions.
//!
//! Every evaluation returns a [`SpecialValue`] carrying an estimate of its
//! absolute error. The incomplete gamma function is evaluated by its power
//! series below `x ≈ s + 1` and by a continued fraction above; the
//! generalized exponential integral has its own series/continued-fraction
//! pair, so the identity `E_m(n) = n^{m-1} Γ(1-m, n)` compares two distinct
//! evaluation routes.

use alloc::format;

use libm::{ceil, exp, expm1, fabs, floor, lgamma, log, pow, tgamma};

use crate::{Error, Result};

const EPS: f64 = f64::EPSILON;
const TINY: f64 = 1e-300;
const MAX_ITER: usize = 2000;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// ζ(k) − 1 for k = 2..=9; larger k are summed directly.
const ZETA_MINUS_ONE: [f64; 8] = [
    0.644_934_066_848_226_4,
    0.202_056_903_159_594_3,
    0.082_323_233_711_138_19,
    0.036_927_755_143_369_93,
    0.017_343_061_984_449_14,
    0.008_349_277_381_922_827,
    0.004_077_356_197_944_339,
    0.002_008_392_826_082_214,
];

/// A special-function value together with a bound on its numerical error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialValue {
    pub value: f64,
    pub abs_error_estimate: f64,
}

impl SpecialValue {
    fn new(value: f64, abs_error_estimate: f64) -> Self {
        Self { value, abs_error_estimate: abs_error_estimate.max(EPS * fabs(value)) }
    }
}

fn domain(func: &'static str, detail: impl Into<alloc::string::String>) -> Error {
    Error::Domain { func, detail: detail.into() }
}

fn is_integer(x: f64) -> bool {
    x == floor(x)
}

fn zeta_minus_one(k: usize) -> f64 {
    if (2..=9).contains(&k) {
        return ZETA_MINUS_ONE[k - 2];
    }
    let mut sum = 0.0;
    let mut n = 2.0;
    loop {
        let term = pow(n, -(k as f64));
        sum += term;
        if term < 1e-18 * sum {
            return sum;
        }
        n += 1.0;
    }
}

/// `(Γ(1+ε) − 1) / ε` for `|ε| ≤ 1/2`, accurate as `ε → 0` (limit −γ).
///
/// Uses `ln Γ(1+ε) = −γε + Σ_{k≥2} (−1)^k ζ(k) ε^k / k`.
pub(crate) fn gamma1pm1_over(eps: f64) -> f64 {
    debug_assert!(fabs(eps) <= 0.5 + 1e-12);
    let mut h = -EULER_GAMMA;
    let mut power = 1.0;
    for k in 2..200 {
        power *= eps;
        let zeta = 1.0 + zeta_minus_one(k);
        let term = if k % 2 == 0 { zeta * power / k as f64 } else { -zeta * power / k as f64 };
        h += term;
        if fabs(term) < 1e-18 {
            break;
        }
    }
    if eps == 0.0 {
        h
    } else {
        expm1(eps * h) / eps
    }
}

/// Complete gamma function Γ(x).
pub fn gamma(x: f64) -> f64 {
    tgamma(x)
}

/// `ln |Γ(x)|`.
pub fn ln_gamma(x: f64) -> f64 {
    lgamma(x)
}

/// Modified Lentz evaluation of `b0 + a1/(b1 + a2/(b2 + ...))`.
fn lentz(b0: f64, term: impl Fn(usize) -> (f64, f64)) -> Result<(f64, usize)> {
    let mut f = if b0 == 0.0 { TINY } else { b0 };
    let mut c = f;
    let mut d = 0.0;
    for i in 1..MAX_ITER {
        let (a, b) = term(i);
        d = b + a * d;
        if fabs(d) < TINY {
            d = TINY;
        }
        c = b + a / c;
        if fabs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if fabs(delta - 1.0) < EPS {
            return Ok((f, i));
        }
    }
    Err(Error::NonConvergence { what: "continued fraction", iterations: MAX_ITER, residual: f64::NAN })
}

/// Upper incomplete gamma function `Γ(s, x) = ∫_x^∞ e^{-t} t^{s-1} dt`.
///
/// Defined for `s > 0` and `x ≥ 0`. For integer `s` the finite closed sum
/// `(s-1)! e^{-x} Σ_{k<s} x^k/k!` also gives the real value for `x < 0`;
/// non-integer `s` with `x < 0` is refused as complex-valued.
pub fn upper_incomplete_gamma(s: f64, x: f64) -> Result<SpecialValue> {
    const NAME: &str = "upper_incomplete_gamma";
    if !(s > 0.0) || !s.is_finite() {
        return Err(domain(NAME, format!("order s = {s} must be positive and finite")));
    }
    if x.is_nan() {
        return Err(domain(NAME, "x is NaN"));
    }
    if x < 0.0 {
        if is_integer(s) && s <= 170.0 {
            return Ok(integer_order_gamma(s as usize, x));
        }
        return Err(domain(NAME, format!("x = {x} < 0 with non-integer order s = {s} is complex-valued")));
    }
    if x == 0.0 {
        let g = gamma(s);
        return Ok(SpecialValue::new(g, 4.0 * EPS * fabs(g)));
    }
    if x == f64::INFINITY {
        return Ok(SpecialValue::new(0.0, 0.0));
    }
    if x >= s + 1.0 {
        let b0 = x + 1.0 - s;
        let (f, iters) = lentz(b0, |i| (-(i as f64) * (i as f64 - s), b0 + 2.0 * i as f64))?;
        let value = exp(s * log(x) - x) / f;
        return Ok(SpecialValue::new(value, (iters as f64 + 8.0) * EPS * fabs(value)));
    }
    if s < 0.5 {
        return Ok(small_order_gamma(s, x));
    }
    // Γ(s) − γ(s, x) with the lower function from its positive series.
    let mut term = 1.0 / s;
    let mut sum = term;
    let mut n = 1.0;
    while fabs(term) > EPS * fabs(sum) {
        term *= x / (s + n);
        sum += term;
        n += 1.0;
        if n > MAX_ITER as f64 {
            return Err(Error::NonConvergence {
                what: "incomplete gamma series",
                iterations: MAX_ITER,
                residual: term,
            });
        }
    }
    let lower = sum * exp(s * log(x) - x);
    let complete = gamma(s);
    let value = complete - lower;
    let err = (n + 8.0) * EPS * (fabs(complete) + fabs(lower));
    Ok(SpecialValue::new(value, err))
}

/// `Γ(s, x)` for small `s` and `0 < x < s + 1` without cancelling `Γ(s)`
/// against `x^s / s`.
fn small_order_gamma(s: f64, x: f64) -> SpecialValue {
    let lx = log(x);
    let head = gamma1pm1_over(s) - expm1(s * lx) / s;
    let mut tail = 0.0;
    let mut abs_tail = 0.0;
    let mut power = 1.0;
    for k in 1..MAX_ITER {
        power *= -x / k as f64;
        let term = power / (s + k as f64);
        tail += term;
        abs_tail += fabs(term);
        if fabs(term) < EPS * 1e-2 * fabs(tail) {
            break;
        }
    }
    let xs = exp(s * lx);
    let value = head - xs * tail;
    let err = 16.0 * EPS * (fabs(head) + xs * abs_tail + fabs(expm1(s * lx) / s));
    SpecialValue::new(value, err)
}

/// Integer order: `Γ(s, x) = (s-1)! e^{-x} Σ_{k=0}^{s-1} x^k / k!`, valid for all real `x`.
fn integer_order_gamma(s: usize, x: f64) -> SpecialValue {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut abs_sum = 1.0;
    for k in 1..s {
        term *= x / k as f64;
        sum += term;
        abs_sum += fabs(term);
    }
    let scale = gamma(s as f64) * exp(-x);
    SpecialValue::new(scale * sum, 4.0 * (s as f64 + 2.0) * EPS * scale * abs_sum)
}

/// Generalized exponential integral `E_m(n) = ∫_1^∞ e^{-nt} t^{-m} dt` for real `m`, `n > 0`.
pub fn generalized_exp_integral(m: f64, n: f64) -> Result<SpecialValue> {
    const NAME: &str = "generalized_exp_integral";
    if !(n > 0.0) || !m.is_finite() {
        return Err(domain(NAME, format!("need n > 0 and finite m, got m = {m}, n = {n}")));
    }
    if n == f64::INFINITY {
        return Ok(SpecialValue::new(0.0, 0.0));
    }
    if n >= 1.0 {
        let b0 = n + m;
        let (f, iters) = lentz(b0, |i| {
            let i = i as f64;
            (-i * (m - 1.0 + i), b0 + 2.0 * i)
        })?;
        let value = exp(-n) / f;
        return Ok(SpecialValue::new(value, (iters as f64 + 8.0) * EPS * fabs(value)));
    }
    if m > 1.5 {
        // Upward recurrence E_{p+1}(n) = (e^{-n} − n E_p(n)) / p from p ∈ (0.5, 1.5].
        let steps = ceil(m - 1.5) as usize;
        let base = m - steps as f64;
        let start = exp_integral_series(base, n);
        let mut value = start.value;
        let mut err = start.abs_error_estimate;
        let en = exp(-n);
        for i in 0..steps {
            let p = base + i as f64;
            value = (en - n * value) / p;
            err = (n * err) / p + 4.0 * EPS * fabs(value);
        }
        return Ok(SpecialValue::new(value, err));
    }
    Ok(exp_integral_series(m, n))
}

/// Small-argument series `E_m(n) = n^{m-1} Γ(1-m) − Σ_{k≥0} (−n)^k / (k! (1−m+k))`,
/// for `m ≤ 1.5` and `0 < n < 1`.
fn exp_integral_series(m: f64, n: f64) -> SpecialValue {
    let eps = 1.0 - m;
    let ln_n = log(n);
    // n^{-ε} Γ(ε) − 1/ε, i.e. the k = 0 term folded into the gamma term.
    let head = if fabs(eps) <= 0.5 {
        if eps == 0.0 {
            -EULER_GAMMA - ln_n
        } else {
            gamma1pm1_over(eps) * exp(-eps * ln_n) + expm1(-eps * ln_n) / eps
        }
    } else {
        exp(-eps * ln_n) * gamma(eps) - 1.0 / eps
    };
    let mut tail = 0.0;
    let mut abs_tail = 0.0;
    let mut power = 1.0;
    for k in 1..MAX_ITER {
        power *= -n / k as f64;
        let term = power / (eps + k as f64);
        tail += term;
        abs_tail += fabs(term);
        if fabs(term) < EPS * 1e-2 * fabs(tail) {
            break;
        }
    }
    let value = head - tail;
    let scale = if fabs(eps) <= 0.5 { fabs(head) + fabs(ln_n) } else { exp(-eps * ln_n) * fabs(gamma(eps)) };
    SpecialValue::new(value, 16.0 * EPS * (scale + abs_tail))
}

/// Misra function `φ_m(x) = E_{-m}(x)`.
pub fn misra(m: f64, x: f64) -> Result<SpecialValue> {
    if !(x > 0.0) {
        return Err(domain("misra", format!("x = {x} must be positive")));
    }
    generalized_exp_integral(-m, x)
}

/// Complete beta function `β(m, n) = Γ(m)Γ(n)/Γ(m+n)`.
pub fn complete_beta(m: f64, n: f64) -> Result<SpecialValue> {
    if !(m > 0.0 && n > 0.0) || !(m.is_finite() && n.is_finite()) {
        return Err(domain("complete_beta", format!("arguments must be positive, got ({m}, {n})")));
    }
    let value = if m + n < 170.0 {
        gamma(m) * gamma(n) / gamma(m + n)
    } else {
        exp(ln_gamma(m) + ln_gamma(n) - ln_gamma(m + n))
    };
    Ok(SpecialValue::new(value, 16.0 * EPS * value))
}

/// Generalized binomial coefficient `C(r, k) = Π_{i<k} (r − i) / k!`.
pub fn gen_binomial(r: f64, k: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..k {
        c *= (r - i as f64) / (i + 1) as f64;
    }
    c
}
