//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any line fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use fde_cli::corpus::CorpusPlan;
use fde_core::bounds::{BoundOp, SuiteSummary, Verdict};
use fde_core::fde::{entropy_integrand, fde_closed_form, fde_numeric, table2_report, ClosedForm, TABLE2_TOLERANCE};
use fde_core::fitting::{run_validation, FitOptions, MeanEstimator, Profile, ProfileSample};
use fde_core::specfun::{gamma, generalized_exp_integral, upper_incomplete_gamma};
use fde_core::velocity::{
    cdf_quadrature, cdf_series, cdf_truncated, lagrange_linear_ab, predict_velocity, quadratic_root, quadratic_roots,
    solve_lagrange_exact_attempt, solve_lagrange_linear, solve_stationarity, Branch, LagrangePair, SeriesOrder, Solver,
    VelocityModel, C0,
};
use fde_core::{Alpha, DistributionSpec, Family, QuadratureConfig, Status};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_611;

struct Gate {
    failed: usize,
}

impl Gate {
    fn line(&mut self, name: &str, pass: bool, detail: String) {
        if !pass {
            self.failed += 1;
        }
        println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn al(a: f64) -> Alpha {
    Alpha::new(a).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

fn table2_reproducible(g: &mut Gate) {
    let t = Instant::now();
    let rows = table2_report(&cfg()).unwrap();
    let secs = t.elapsed().as_secs_f64();
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for r in rows.iter().filter(|r| matches!(r.spec.family(), Family::Uniform { .. } | Family::Exponential { .. })) {
        for c in &r.cells {
            let closed = c.closed.unwrap_or(f64::NAN);
            let d = (closed - c.printed).abs().max((c.adaptive.value - c.printed).abs());
            ok &= d <= TABLE2_TOLERANCE;
            worst = worst.max(if d.is_nan() { f64::INFINITY } else { d });
        }
    }
    g.line(
        "table2-reproducible",
        ok && secs < 5.0,
        format!("uniform and exponential rows, worst |value - printed| = {worst:.2e} (tol 5e-4), runtime {secs:.2} s (< 5 s)"),
    );
}

fn table2_self_consistency(g: &mut Gate) {
    let rows = table2_report(&cfg()).unwrap();
    let mut worst: f64 = 0.0;
    let mut listed = Vec::new();
    for r in rows.iter().filter(|r| !matches!(r.spec.family(), Family::Uniform { .. } | Family::Exponential { .. })) {
        for c in &r.cells {
            worst = worst.max((c.adaptive.value - c.fixed.value).abs());
            if let Status::Discrepant { reference } = c.verdict {
                listed.push(format!(
                    "{} α={}: printed {reference:.4} recomputed {:.4}",
                    r.label, c.alpha, c.adaptive.value
                ));
            }
        }
    }
    g.line(
        "table2-scheme-agreement",
        worst <= 1e-8,
        format!("adaptive vs fixed rule, worst gap {worst:.2e} (tol 1e-8), {} discrepant cells", listed.len()),
    );
    for l in listed {
        println!("    {l}");
    }
}

fn closed(s: &DistributionSpec, a: f64) -> f64 {
    match fde_closed_form(s, al(a)) {
        ClosedForm::Value { value, .. } => value,
        _ => f64::NAN,
    }
}

fn closed_vs_quadrature(g: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let alphas: Vec<f64> = (2..=10).map(|i| i as f64 / 10.0).collect();
    let mut worst: f64 = 0.0;
    let mut checked = 0usize;
    let mut complex_ok = true;
    let mut check = |s: &DistributionSpec, a: f64, worst: &mut f64| {
        let n = fde_numeric(s, al(a), &cfg()).unwrap().value;
        let d = (n - closed(s, a)).abs();
        *worst = worst.max(if d.is_nan() { f64::INFINITY } else { d });
        checked += 1;
    };
    for _ in 0..20 {
        let lo = rng.random_range(0.0..3.0);
        let fams = [
            Family::Uniform { a: lo, b: lo + rng.random_range(1.0..6.0) },
            Family::Exponential { lambda: rng.random_range(0.05..=1.0) },
            Family::Gamma { m: rng.random_range(0.05..=1.0), n: 1.0 },
            {
                let sigma = rng.random_range(0.2..3.0);
                Family::ParetoII { k: sigma * rng.random_range(1.0..3.0), sigma }
            },
        ];
        for f in fams {
            let s = DistributionSpec::new(f).unwrap();
            for &a in &alphas {
                check(&s, a, &mut worst);
            }
        }
        // Beta with one unit shape peaks at the other shape, so only Beta(1,1)
        // is admissible below α = 1; other shapes are checked at α = 1 and must
        // report a complex domain below it.
        let m = rng.random_range(1.0..5.0);
        for f in [Family::Beta { m, n: 1.0 }, Family::Beta { m: 1.0, n: m }] {
            let s = DistributionSpec::new(f).unwrap();
            check(&s, 1.0, &mut worst);
            for &a in alphas.iter().filter(|&&a| a < 1.0) {
                complex_ok &= fde_numeric(&s, al(a), &cfg()).unwrap().status == Status::ComplexDomain;
            }
        }
    }
    let unit = DistributionSpec::new(Family::Beta { m: 1.0, n: 1.0 }).unwrap();
    for &a in &alphas {
        check(&unit, a, &mut worst);
    }
    g.line(
        "closed-vs-quadrature",
        worst <= 1e-6 && complex_ok,
        format!("{checked} cells over 6 families x 20 draws x 9 orders, worst gap {worst:.2e} (tol 1e-6), beta complex-domain check {complex_ok}"),
    );
}

fn special_functions(g: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut e_worst, mut g_worst, mut gr_worst): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..1000 {
        let m: f64 = rng.random_range(-1.0..=1.0);
        let n: f64 = rng.random_range(1e-3..=10.0);
        if (1.0 - m).abs() > 1e-9 {
            let e = generalized_exp_integral(m, n).unwrap().value;
            let r = n.powf(m - 1.0) * upper_incomplete_gamma(1.0 - m, n).unwrap().value;
            e_worst = e_worst.max(rel(e, r));
        }
        let s: f64 = rng.random_range(0.05..=6.0);
        let x: f64 = rng.random_range(0.0..=30.0);
        let lhs = upper_incomplete_gamma(s + 1.0, x).unwrap().value;
        let rhs = s * upper_incomplete_gamma(s, x).unwrap().value + x.powf(s) * (-x).exp();
        g_worst = g_worst.max(rel(lhs, rhs));
        let z: f64 = rng.random_range(0.05..=20.0);
        gr_worst = gr_worst.max(rel(gamma(z + 1.0), z * gamma(z)));
    }
    let worst = e_worst.max(g_worst).max(gr_worst);
    g.line(
        "special-function-identities",
        worst <= 1e-12,
        format!("1000 points: E_m {e_worst:.1e}, Γ(s,x) recurrence {g_worst:.1e}, Γ recurrence {gr_worst:.1e} (tol 1e-12 rel)"),
    );
}

fn bounds_suite(g: &mut Gate) {
    let draws = CorpusPlan::new(200, &[], &[]).unwrap().run(SEED, &cfg()).unwrap();
    let checks: Vec<_> = draws.iter().flat_map(|d| d.checks.iter().cloned()).collect();
    let sum = SuiteSummary::of(&checks);
    let covered = BoundOp::ALL.iter().all(|op| draws.iter().any(|d| d.op == *op));
    let evaluated_ops = BoundOp::ALL
        .iter()
        .filter(|op| draws.iter().any(|d| d.op == **op && d.checks.iter().any(|c| c.verdict == Verdict::Holds)))
        .count();
    g.line(
        "bounds-suite",
        sum.violated == 0 && covered,
        format!(
            "200 draws, {} checks: {} hold, {} violated, {} skipped (skipped fraction {:.3}); {} of 6 ops with evaluated checks",
            sum.total(),
            sum.holds,
            sum.violated,
            sum.skipped,
            sum.skipped_fraction(),
            evaluated_ops
        ),
    );
}

fn integrand_shape(g: &mut Gate) {
    const GRID: usize = 10_000;
    let step = 1.0 / GRID as f64;
    let h = |f: f64, a: f64| entropy_integrand(f, al(a)).unwrap();
    let mut violations = 0usize;
    let mut worst_arg: f64 = 0.0;
    for i in 1..=10 {
        let a = i as f64 / 10.0;
        let (mut best, mut arg) = (f64::NEG_INFINITY, 0.0);
        for j in 1..=GRID {
            let f = j as f64 * step;
            let v = h(f, a);
            if v > best {
                best = v;
                arg = f;
            }
            if j < GRID {
                let d2 = h(f + step, a) - 2.0 * v + if j > 1 { h(f - step, a) } else { 0.0 };
                violations += usize::from(d2 > 1e-10);
            }
            if i < 10 {
                // Raising the order lowers h where −ln f < 1 and raises it where −ln f > 1.
                let d = h(f, a + 0.1) - v;
                let y = -f.ln();
                violations += usize::from((y < 1.0 && d > 1e-10) || (y > 1.0 && d < -1e-10));
            }
        }
        worst_arg = worst_arg.max((arg - (-a).exp()).abs());
        violations += usize::from((arg - (-a).exp()).abs() > step);
        violations += usize::from(best > (-a).exp() * a.powf(a) + 1e-10);
    }
    g.line(
        "integrand-shape",
        violations == 0,
        format!("10 orders x 1e4 grid: argmax off e^-α by ≤ {worst_arg:.1e}, {violations} violations beyond 1e-10"),
    );
}

fn stationarity_root(g: &mut Gate) {
    let (mut worst, mut prod): (f64, f64) = (0.0, 0.0);
    for i in 0..=1000 {
        let x = -5.0 + i as f64 * 0.01;
        let y = solve_stationarity(x, al(0.5)).unwrap();
        worst = worst.max(rel(y, quadratic_root(x, Branch::PlusRoot)));
        let (p, m) = quadratic_roots(x);
        prod = prod.max((p * m - 0.25).abs());
    }
    g.line(
        "stationarity-root",
        worst <= 1e-12 && prod <= 1e-12,
        format!("1001 points on [-5, 5]: solver vs quadratic {worst:.1e}, |root product - 1/4| {prod:.1e} (tol 1e-12)"),
    );
}

fn linear_centre(g: &mut Gate) {
    let (a, b) = lagrange_linear_ab(2.0 / 3.0).unwrap();
    let lag = solve_lagrange_linear(2.0 / 3.0, &cfg()).unwrap();
    let mut worst: f64 = 0.0;
    for k in [0.25, 0.5, 0.8, 1.0] {
        let m = VelocityModel::new(lag, k).unwrap();
        for i in 0..100 {
            let y = i as f64 / 99.0;
            worst = worst.max((predict_velocity(y, &m).unwrap().nu_hat - y.powf(k / 2.0)).abs());
        }
    }
    let ab = a.abs().max((b + C0).abs());
    g.line(
        "linear-centre",
        ab <= 1e-12 && worst <= 1e-12,
        format!(
            "ν̂_m = 2/3: (a, b) = ({a:.3e}, {b:.15}), |b + C0| {:.1e}; profile vs (y/M)^(k/2) {worst:.1e} (tol 1e-12)",
            (b + C0).abs()
        ),
    );
}

fn exact_solver(g: &mut Gate) {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for nu_m in [0.60, 0.65, 0.70] {
        let e = solve_lagrange_exact_attempt(nu_m, &cfg()).unwrap();
        let l = solve_lagrange_linear(nu_m, &cfg()).unwrap();
        let (r0, r1) = e.best.constraint_residuals;
        worst = worst.max(r0.abs()).max(r1.abs());
        parts.push(format!(
            "ν̂_m={nu_m}: exact ({r0:.1e}, {r1:.1e}) linear ({:.1e}, {:.1e})",
            l.constraint_residuals.0, l.constraint_residuals.1
        ));
    }
    g.line("exact-lagrange", worst <= 1e-8, format!("worst residual {worst:.2e} (tol 1e-8); {}", parts.join("; ")));
}

fn fitting_round_trip(g: &mut Gate) {
    let mut ok = true;
    let mut parts = Vec::new();
    for nu_m in [0.6, 0.7] {
        let lag = solve_lagrange_linear(nu_m, &cfg()).unwrap();
        for k in [0.4, 0.7, 1.0] {
            let m = VelocityModel::new(lag, k).unwrap();
            let samples = (1..=20)
                .map(|i| {
                    let y = i as f64 / 20.0;
                    ProfileSample { y_over_m: y, nu_hat: predict_velocity(y, &m).unwrap().nu_hat.clamp(0.0, 1.0) }
                })
                .collect();
            let p = Profile::new(samples).unwrap();
            let r =
                run_validation(&p, &FitOptions { mean: MeanEstimator::Explicit(nu_m), ..Default::default() }).unwrap();
            let pass = (r.k() - k).abs() <= 1e-3 && r.r2 >= 0.9999 && r.mrae <= 1e-6 && r.rmse <= 1e-6;
            ok &= pass;
            parts.push(format!("({nu_m}, {k}): k={:.6} R²={:.8} MRAE={:.1e} RMSE={:.1e}", r.k(), r.r2, r.mrae, r.rmse));
        }
    }
    g.line("fitting-round-trip", ok, parts.join("; "));
}

fn pair(a: f64, b: f64) -> LagrangePair {
    LagrangePair { a, b, nu_m: 0.6, solver: Solver::LinearTruncated, constraint_residuals: (0.0, 0.0) }
}

fn series_cdf(g: &mut Gate) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut mismatches, mut low_n, mut low_worst) = (0usize, 0usize, 0.0f64);
    let (mut high_n, mut high_worst, mut inner_worst) = (0usize, 0.0f64, 0.0f64);
    let q = cfg();
    while low_n < 500 {
        let (a, b, v): (f64, f64, f64) =
            (rng.random_range(-0.9..0.9), rng.random_range(-0.9..0.9), rng.random_range(0.0..=1.0));
        if b == 0.0 || (a + b * v).abs() >= 1.0 {
            continue;
        }
        let p = pair(a, b);
        let s = cdf_series(v, &p, SeriesOrder::TWO_TERM, false).unwrap().value;
        let t = cdf_truncated(v, &p).unwrap();
        low_n += 1;
        mismatches += usize::from(s.to_bits() != t.to_bits());
        low_worst = low_worst.max((s - t).abs());
        if high_n < 200 {
            let s8 = cdf_series(v, &p, SeriesOrder { i_max: 8, k_max: 8 }, false).unwrap().value;
            let d = (s8 - cdf_quadrature(v, &p, &q).unwrap()).abs();
            high_worst = high_worst.max(d);
            if a.abs() <= 0.8 && (a + b * v).abs() <= 0.8 {
                inner_worst = inner_worst.max(d);
            }
            high_n += 1;
        }
    }
    g.line(
        "series-cdf",
        mismatches == 0 && high_worst <= 1e-6,
        format!(
            "(1,0) vs truncated: {mismatches}/{low_n} not bit-identical (max gap {low_worst:.2e}); (8,8) vs quadrature on {high_n} points: {high_worst:.2e} (tol 1e-6), {inner_worst:.2e} where |a|, |a+bν̂| ≤ 0.8"
        ),
    );
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_fde")).args(args).output().expect("run fde");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn determinism(g: &mut Gate) {
    let dir = tempfile::tempdir().unwrap();
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/profile.csv");
    let data = data.to_str().unwrap();
    let mut same = true;
    let mut n = 0;
    let runs: [&[&str]; 5] = [
        &["bounds", "--seed", "42", "--draws", "60", "--format", "kv"],
        &["table2", "--format", "csv"],
        &["entropy", "gamma:m=0.5,n=2", "--alpha", "0.6", "--format", "kv"],
        &["velocity", "fit", data, "--format", "kv"],
        &["velocity", "predict", "--nu-m", "0.65", "--k", "0.7", "--points", "25"],
    ];
    for args in runs {
        let first = run_cli(args);
        let second = run_cli(args);
        same &= first == second && !first.1.is_empty();
        n += 1;
    }
    let mut svgs = Vec::new();
    for run in ["a", "b"] {
        let plot_dir = dir.path().join(run);
        let (code, _) = run_cli(&["velocity", "fit", data, "--plot-dir", plot_dir.to_str().unwrap()]);
        same &= code == 0;
        let files: Vec<Vec<u8>> = ["cdf_fit.svg", "profile.svg", "regression.svg"]
            .iter()
            .map(|f| std::fs::read(plot_dir.join(f)).unwrap_or_default())
            .collect();
        svgs.push(files);
    }
    same &= svgs[0] == svgs[1] && svgs[0].iter().all(|f| !f.is_empty());
    g.line("determinism", same, format!("{n} report commands and 3 plot files byte-identical across repeated runs"));
}

fn main() {
    // `cargo test -- --list` and filters from the test runner are ignored.
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let mut g = Gate { failed: 0 };
    table2_reproducible(&mut g);
    table2_self_consistency(&mut g);
    closed_vs_quadrature(&mut g);
    special_functions(&mut g);
    bounds_suite(&mut g);
    integrand_shape(&mut g);
    stationarity_root(&mut g);
    linear_centre(&mut g);
    exact_solver(&mut g);
    fitting_round_trip(&mut g);
    series_cdf(&mut g);
    determinism(&mut g);
    println!("acceptance: {} of 12 criteria failed", g.failed);
    if g.failed > 0 {
        std::process::exit(1);
    }
}
