//! Numerical integration over finite, semi-infinite and infinite intervals.
//!
//! Two independent schemes are provided:
//!
//! - [`integrate`] / [`integrate_with`]: globally adaptive 15-point
//!   Gauss–Kronrod with an embedded 7-point Gauss error estimate.
//! - [`integrate_fixed`]: composite Gauss–Legendre on a geometrically graded
//!   panel layout, no adaptivity.
//!
//! Infinite pieces are mapped onto `(0, 1]` with `x = a + (1 − t)/t`.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use libm::{cos, fabs, pow};

use crate::{Error, Result};

const EPS: f64 = f64::EPSILON;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

/// How integrable endpoint singularities are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EndpointHandling {
    /// Integrate in the original variable and rely on bisection alone.
    None,
    /// Apply `x = lo + w·u^{1/(1+p)}` when an endpoint exponent `p < 0` is declared.
    #[default]
    AlgebraicSubstitution,
}

/// Tolerances and limits for the adaptive scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub endpoint_handling: EndpointHandling,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-13,
            max_subdivisions: 4000,
            endpoint_handling: EndpointHandling::AlgebraicSubstitution,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) || self.max_subdivisions == 0 {
            return Err(Error::Domain {
                func: "QuadratureConfig",
                detail: alloc::format!(
                    "tolerances must be positive and max_subdivisions nonzero (rel {}, abs {}, max {})",
                    self.rel_tol,
                    self.abs_tol,
                    self.max_subdivisions
                ),
            });
        }
        Ok(())
    }
}

/// Result of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

/// Declared power-law behaviour `|x − endpoint|^p` of the integrand at the
/// outer endpoints of a finite domain. Only `p < 0` triggers a substitution.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Endpoints {
    pub left: Option<f64>,
    pub right: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
enum Map {
    Identity,
    /// x = lo + w u^q
    LeftPower {
        lo: f64,
        w: f64,
        q: f64,
    },
    /// x = hi − w u^q
    RightPower {
        hi: f64,
        w: f64,
        q: f64,
    },
    /// x = a + (1 − t)/t
    Upper {
        a: f64,
    },
    /// x = b − (1 − t)/t
    Lower {
        b: f64,
    },
}

impl Map {
    #[inline]
    fn apply(self, u: f64) -> (f64, f64) {
        match self {
            Map::Identity => (u, 1.0),
            Map::LeftPower { lo, w, q } => {
                let uq = pow(u, q);
                (lo + w * uq, w * q * uq / u)
            }
            Map::RightPower { hi, w, q } => {
                let uq = pow(u, q);
                (hi - w * uq, w * q * uq / u)
            }
            Map::Upper { a } => (a + (1.0 - u) / u, 1.0 / (u * u)),
            Map::Lower { b } => (b - (1.0 - u) / u, 1.0 / (u * u)),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    map: Map,
    u0: f64,
    u1: f64,
}

fn pieces(breaks: &[f64], ends: Endpoints, handling: EndpointHandling) -> Result<Vec<Piece>> {
    if breaks.len() < 2 {
        return Err(Error::Domain { func: "integrate", detail: "need at least two break points".into() });
    }
    let mut pts: Vec<f64> = Vec::with_capacity(breaks.len() + 2);
    for &p in breaks {
        if p.is_nan() {
            return Err(Error::Domain { func: "integrate", detail: "NaN break point".into() });
        }
        if let Some(&last) = pts.last() {
            if p < last {
                return Err(Error::Domain { func: "integrate", detail: "break points must be sorted".into() });
            }
            if p == last {
                continue;
            }
        }
        pts.push(p);
    }
    if pts.len() == 1 {
        return Ok(Vec::new());
    }
    if pts[0] == f64::NEG_INFINITY && pts[pts.len() - 1] == f64::INFINITY && pts.len() == 2 {
        pts.insert(1, 0.0);
    }
    let use_sub = handling == EndpointHandling::AlgebraicSubstitution;
    let left_p = ends.left.filter(|p| use_sub && *p < 0.0 && *p > -1.0);
    let right_p = ends.right.filter(|p| use_sub && *p < 0.0 && *p > -1.0);
    // A singular finite end adjoining an infinite piece gets its own finite piece.
    if left_p.is_some() && pts[0].is_finite() && pts[1] == f64::INFINITY {
        pts.insert(1, pts[0] + 1.0);
    }
    let n = pts.len();
    if right_p.is_some() && pts[n - 1].is_finite() && pts[n - 2] == f64::NEG_INFINITY {
        pts.insert(n - 1, pts[n - 1] - 1.0);
    }
    let n = pts.len();
    // A lone finite piece with both ends singular is split so each map owns one end.
    if n == 2 && left_p.is_some() && right_p.is_some() && pts[0].is_finite() && pts[1].is_finite() {
        let mid = 0.5 * (pts[0] + pts[1]);
        pts.insert(1, mid);
    }
    let n = pts.len();
    let mut out = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let (a, b) = (pts[i], pts[i + 1]);
        let map = if a == f64::NEG_INFINITY {
            Map::Lower { b }
        } else if b == f64::INFINITY {
            Map::Upper { a }
        } else if i == 0 && left_p.is_some() {
            Map::LeftPower { lo: a, w: b - a, q: 1.0 / (1.0 + left_p.unwrap_or(0.0)) }
        } else if i == n - 2 && right_p.is_some() {
            Map::RightPower { hi: b, w: b - a, q: 1.0 / (1.0 + right_p.unwrap_or(0.0)) }
        } else {
            Map::Identity
        };
        let (u0, u1) = match map {
            Map::Identity => (a, b),
            _ => (0.0, 1.0),
        };
        out.push(Piece { map, u0, u1 });
    }
    Ok(out)
}

#[inline]
fn eval<F: Fn(f64) -> f64>(f: &F, map: Map, u: f64) -> Result<f64> {
    let (x, jac) = map.apply(u);
    let fx = f(x);
    if fx == 0.0 {
        return Ok(0.0);
    }
    let v = fx * jac;
    if !v.is_finite() {
        return Err(Error::NonFiniteIntegrand { x });
    }
    Ok(v)
}

struct Segment {
    a: f64,
    b: f64,
    piece: usize,
    value: f64,
    error: f64,
    floor: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 15-point Kronrod step: `(value, error, roundoff floor)`.
fn gk15<F: Fn(f64) -> f64>(f: &F, map: Map, a: f64, b: f64) -> Result<(f64, f64, f64)> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = eval(f, map, centre)?;
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = fabs(resk);
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(f, map, centre - dx)?;
        let f2 = eval(f, map, centre + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (fabs(f1) + fabs(f2));
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = 0.5 * resk;
    let mut resasc = WGK[7] * fabs(fc - reskh);
    for j in 0..7 {
        resasc += WGK[j] * (fabs(fv1[j] - reskh) + fabs(fv2[j] - reskh));
    }
    let h = fabs(half);
    let value = resk * half;
    resabs *= h;
    resasc *= h;
    let mut err = fabs((resk - resg) * half);
    if resasc != 0.0 && err != 0.0 {
        let r = pow(200.0 * err / resasc, 1.5);
        err = resasc * if r < 1.0 { r } else { 1.0 };
    }
    let floor = 50.0 * EPS * resabs;
    if err < floor {
        err = floor;
    }
    Ok((value, err, floor))
}

/// Integrate `f` over `[lo, hi]` (either bound may be infinite).
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, cfg: &QuadratureConfig) -> Result<Integral> {
    integrate_with(f, &[lo, hi], Endpoints::default(), cfg)
}

/// Integrate `f` over the sorted break points `breaks`, splitting at every
/// interior point, with optional endpoint singularity hints.
pub fn integrate_with<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    ends: Endpoints,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    cfg.validate()?;
    let pieces = pieces(breaks, ends, cfg.endpoint_handling)?;
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut settled_value = 0.0;
    let mut settled_err = 0.0;
    for (i, p) in pieces.iter().enumerate() {
        let (v, e, floor) = gk15(&f, p.map, p.u0, p.u1)?;
        evaluations += 15;
        total += v;
        total_err += e;
        heap.push(Segment { a: p.u0, b: p.u1, piece: i, value: v, error: e, floor });
    }
    let mut subdivisions = 0;
    loop {
        if total_err <= cfg.abs_tol.max(cfg.rel_tol * fabs(total)) {
            break;
        }
        let Some(seg) = heap.pop() else { break };
        let mid = 0.5 * (seg.a + seg.b);
        if seg.error <= seg.floor || mid <= seg.a || mid >= seg.b {
            settled_value += seg.value;
            settled_err += seg.error;
            continue;
        }
        if subdivisions >= cfg.max_subdivisions {
            heap.push(seg);
            return Err(Error::Quadrature { value: total, abs_error: total_err, subdivisions });
        }
        subdivisions += 1;
        let map = pieces[seg.piece].map;
        let (v1, e1, f1) = gk15(&f, map, seg.a, mid)?;
        let (v2, e2, f2) = gk15(&f, map, mid, seg.b)?;
        evaluations += 30;
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.error;
        heap.push(Segment { a: seg.a, b: mid, piece: seg.piece, value: v1, error: e1, floor: f1 });
        heap.push(Segment { a: mid, b: seg.b, piece: seg.piece, value: v2, error: e2, floor: f2 });
    }
    // Re-sum from the segments to shed accumulated update rounding.
    let mut value = settled_value;
    let mut abs_error = settled_err;
    for s in heap.iter() {
        value += s.value;
        abs_error += s.error;
    }
    Ok(Integral { value, abs_error, evaluations })
}

/// Fixed composite Gauss–Legendre layout.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    low_nodes: Vec<f64>,
    low_weights: Vec<f64>,
    /// Number of geometrically shrinking panels toward each end of a piece.
    pub graded_levels: u32,
    /// Number of uniform panels across the middle half of a piece.
    pub uniform_panels: usize,
}

impl Default for FixedRule {
    fn default() -> Self {
        Self::new(20, 60, 32)
    }
}

impl FixedRule {
    /// An `order`-point rule; the error estimate compares against `order − 6` points.
    pub fn new(order: usize, graded_levels: u32, uniform_panels: usize) -> Self {
        let order = order.max(8);
        let (nodes, weights) = gauss_legendre(order);
        let (low_nodes, low_weights) = gauss_legendre(order - 6);
        Self { nodes, weights, low_nodes, low_weights, graded_levels, uniform_panels: uniform_panels.max(1) }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Panel edges on `[0, 1]`: graded toward 0 and 1, uniform in the middle.
    fn layout(&self) -> Vec<f64> {
        let mut edges = Vec::new();
        edges.push(0.0);
        for k in (2..self.graded_levels + 2).rev() {
            edges.push(pow(2.0, -(k as f64)) * 0.5);
        }
        edges.push(0.25);
        for j in 1..self.uniform_panels {
            edges.push(0.25 + 0.5 * j as f64 / self.uniform_panels as f64);
        }
        edges.push(0.75);
        for k in 2..self.graded_levels + 2 {
            edges.push(1.0 - pow(2.0, -(k as f64)) * 0.5);
        }
        edges.push(1.0);
        edges
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = cos(core::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if fabs(dx) < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Integrate with the fixed graded rule. Break points and infinite ends are
/// handled as in [`integrate_with`]; no singularity substitution is applied.
pub fn integrate_fixed<F: Fn(f64) -> f64>(f: F, breaks: &[f64], rule: &FixedRule) -> Result<Integral> {
    let pieces = pieces(breaks, Endpoints::default(), EndpointHandling::None)?;
    let edges = rule.layout();
    let mut value = 0.0;
    let mut low = 0.0;
    let mut evaluations = 0;
    for p in &pieces {
        let width = p.u1 - p.u0;
        for w in edges.windows(2) {
            let a = p.u0 + width * w[0];
            let b = p.u0 + width * w[1];
            if b <= a {
                continue;
            }
            let c = 0.5 * (a + b);
            let h = 0.5 * (b - a);
            for (x, wt) in rule.nodes.iter().zip(&rule.weights) {
                value += h * wt * eval(&f, p.map, c + h * x)?;
            }
            for (x, wt) in rule.low_nodes.iter().zip(&rule.low_weights) {
                low += h * wt * eval(&f, p.map, c + h * x)?;
            }
            evaluations += rule.nodes.len() + rule.low_nodes.len();
        }
    }
    Ok(Integral { value, abs_error: fabs(value - low), evaluations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use libm::{exp, log, sqrt};

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn kronrod_exact_for_degree_22() {
        let f = |x: f64| pow(x, 22.0) + 3.0 * pow(x, 7.0);
        let (v, _, _) = gk15(&f, Map::Identity, 0.0, 1.0).unwrap();
        assert!(fabs(v - (1.0 / 23.0 + 3.0 / 8.0)) < 1e-15);
    }

    #[test]
    fn gauss_weights_sum_to_two() {
        for n in [7, 14, 20, 33] {
            let (x, w) = gauss_legendre(n);
            let s: f64 = w.iter().sum();
            assert!(fabs(s - 2.0) < 1e-14, "n = {n}");
            let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
            assert!(fabs(m - 2.0 / 3.0) < 1e-14);
        }
    }

    #[test]
    fn semi_infinite_exponential() {
        let r = integrate(|x| exp(-x), 0.0, f64::INFINITY, &cfg()).unwrap();
        assert!(fabs(r.value - 1.0) < 1e-12);
        let r = integrate(|x| exp(-x * x), f64::NEG_INFINITY, f64::INFINITY, &cfg()).unwrap();
        assert!(fabs(r.value - sqrt(core::f64::consts::PI)) < 1e-12);
    }

    #[test]
    fn algebraic_endpoint_substitution() {
        let f = |x: f64| 1.0 / sqrt(x * (1.0 - x));
        let r = integrate_with(f, &[0.0, 1.0], Endpoints { left: Some(-0.5), right: Some(-0.5) }, &cfg()).unwrap();
        assert!(fabs(r.value - core::f64::consts::PI) < 1e-11);
        assert!(r.abs_error < 1e-9);
    }

    #[test]
    fn log_singularity_without_hint() {
        let r = integrate(|x| -log(x), 0.0, 1.0, &cfg()).unwrap();
        assert!(fabs(r.value - 1.0) < 1e-10);
    }

    #[test]
    fn fixed_rule_matches_adaptive() {
        let f = |x: f64| exp(-x) * pow(x, 0.3);
        let a = integrate(f, 0.0, f64::INFINITY, &cfg()).unwrap();
        let b = integrate_fixed(f, &[0.0, f64::INFINITY], &FixedRule::default()).unwrap();
        assert!(fabs(a.value - b.value) < 1e-10, "{} vs {}", a.value, b.value);
        assert!(fabs(a.value - crate::specfun::gamma(1.3)) < 1e-10);
    }

    #[test]
    fn break_points_and_reversed_input() {
        let f = |x: f64| fabs(x - 0.3);
        let r = integrate_with(f, &[0.0, 0.3, 1.0], Endpoints::default(), &cfg()).unwrap();
        assert!(fabs(r.value - (0.045 + 0.245)) < 1e-14);
        assert!(integrate_with(f, &[1.0, 0.0], Endpoints::default(), &cfg()).is_err());
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let r = integrate(|x| if x > 0.5 { f64::NAN } else { 1.0 }, 0.0, 1.0, &cfg());
        assert!(matches!(r, Err(Error::NonFiniteIntegrand { .. })));
    }

    #[test]
    fn subdivision_limit_is_an_error() {
        let tight = QuadratureConfig { max_subdivisions: 3, rel_tol: 1e-14, ..cfg() };
        let r = integrate(|x: f64| libm::sin(1.0 / x), 1e-3, 1.0, &tight);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
