//! The subcommands. Each builds a [`Report`] plus any side files.

use std::path::{Path, PathBuf};

use fde_core::bounds::{SuiteSummary, Verdict};
use fde_core::fde::{evaluate, fde_fixed, fde_numeric, shannon_entropy, table2_report, Table2Row};
use fde_core::fitting::{
    run_validation, CdfModel, FitOptions, FitReport, KBoundary, LagrangeSolver, MeanEstimator, Profile,
};
use fde_core::quadrature::FixedRule;
use fde_core::velocity::{
    cdf_quadrature, cdf_truncated, predict_velocity, solve_lagrange_exact, solve_lagrange_linear, LagrangePair, Solver,
    VelocityModel,
};
use fde_core::{Alpha, DistributionSpec, FdeEvaluation, Method, Status};
use serde::Serialize;

use crate::args::{CdfArg, EntropyArgs, EntropyMethod, FitArgs, ModelArgs, PlotArgs, PlotKind, PredictArgs, SolverArg};
use crate::config::Settings;
use crate::corpus::CorpusPlan;
use crate::error::{CliError, Result};
use crate::plot::{Chart, Series, Style};
use crate::profile::read_profile;
use crate::render::{fmt_num, to_kv, Cell, Report, Table};

/// Result of a command: what to print, files to write, and an optional
/// failure verdict reported after the output.
#[derive(Debug)]
pub struct Outcome {
    pub report: Report,
    /// Printed verbatim instead of rendering `report` (plots).
    pub raw: Option<String>,
    pub files: Vec<(PathBuf, String)>,
    pub verdict: Option<CliError>,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Self { report, raw: None, files: Vec::new(), verdict: None }
    }
}

/// Error-sized numbers in scientific notation, non-finite values as in `fmt_num`.
fn sci(x: f64) -> Cell {
    Cell::Text(if x.is_finite() { format!("{x:.3e}") } else { fmt_num(x, 0) })
}

pub fn method_name(m: Method) -> String {
    match m {
        Method::ClosedForm => "closed-form".into(),
        Method::Quadrature => "quadrature".into(),
        Method::Series { terms } => format!("series({terms})"),
        Method::QuadratureFallback { terms } => format!("quadrature-fallback({terms})"),
    }
}

pub fn status_name(s: Status) -> String {
    match s {
        Status::Unchecked => "Unchecked".into(),
        Status::Verified => "Verified".into(),
        Status::Discrepant { reference } => format!("Discrepant(reference={reference})"),
        Status::ComplexDomain => "ComplexDomain".into(),
    }
}

fn solver_name(s: Solver) -> &'static str {
    match s {
        Solver::LinearTruncated => "linear",
        Solver::NumericExact => "exact",
    }
}

// entropy

#[derive(Serialize)]
struct EntropyDoc {
    spec: String,
    alpha: f64,
    value: f64,
    method: String,
    status: String,
    abs_error_estimate: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    normalization: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    shannon_entropy: Option<f64>,
}

pub fn entropy(args: &EntropyArgs, s: &Settings) -> Result<Outcome> {
    let spec: DistributionSpec = args.spec.parse()?;
    let alpha = Alpha::new(args.alpha)?;
    let e: FdeEvaluation = match args.method {
        EntropyMethod::Auto => evaluate(&spec, alpha, &s.quadrature)?,
        EntropyMethod::Quadrature => fde_numeric(&spec, alpha, &s.quadrature)?,
        EntropyMethod::Fixed => fde_fixed(&spec, alpha, &FixedRule::default())?,
    };
    let complex = e.status == Status::ComplexDomain;
    let shannon = if complex && args.allow_shannon_only { Some(shannon_entropy(&spec, &s.quadrature)?) } else { None };
    let doc = EntropyDoc {
        spec: spec.to_text(),
        alpha: alpha.value(),
        value: e.value,
        method: method_name(e.method),
        status: status_name(e.status),
        abs_error_estimate: e.abs_error_estimate,
        normalization: e.normalization.map(|n| n.as_str()),
        shannon_entropy: shannon,
    };
    let mut summary: Vec<(String, Cell)> = vec![
        ("spec".into(), doc.spec.clone().into()),
        ("alpha".into(), doc.alpha.into()),
        ("value".into(), doc.value.into()),
        ("method".into(), doc.method.clone().into()),
        ("status".into(), doc.status.clone().into()),
        ("abs_error_estimate".into(), sci(doc.abs_error_estimate)),
    ];
    if let Some(n) = doc.normalization {
        summary.push(("normalization".into(), n.into()));
    }
    if let Some(h) = shannon {
        summary.push(("shannon_entropy".into(), h.into()));
    }
    let report = Report { summary, tables: vec![], notes: vec![], kv: to_kv(&doc)? };
    let mut out = Outcome::ok(report);
    if complex && !args.allow_shannon_only {
        out.verdict = Some(CliError::Verdict(format!(
            "{}: density exceeds 1, so the order-{} entropy is not real-valued",
            doc.spec, doc.alpha
        )));
    }
    Ok(out)
}

// table2

#[derive(Serialize)]
struct CellDoc {
    alpha: f64,
    printed: f64,
    adaptive: f64,
    fixed: f64,
    scheme_gap: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed: Option<f64>,
    verdict: String,
}

#[derive(Serialize)]
struct RowDoc {
    label: &'static str,
    spec: String,
    cells: Vec<CellDoc>,
}

#[derive(Serialize)]
struct Table2Doc {
    tolerance: f64,
    rows: Vec<RowDoc>,
}

/// Rows whose printed values are expected to reproduce.
pub const REPRODUCIBLE_ROWS: [&str; 2] = ["uniform", "exponential"];

pub fn reproducible(row: &Table2Row) -> bool {
    REPRODUCIBLE_ROWS.contains(&row.spec.family().name())
}

pub fn table2(s: &Settings) -> Result<Outcome> {
    let rows = table2_report(&s.quadrature)?;
    let mut t = Table::new(vec!["row", "alpha", "printed", "adaptive", "fixed", "scheme_gap", "closed", "verdict"]);
    let mut notes = Vec::new();
    let mut docs = Vec::new();
    for r in &rows {
        let mut cells = Vec::new();
        for c in &r.cells {
            let gap = (c.adaptive.value - c.fixed.value).abs();
            let verdict = match c.verdict {
                Status::Verified => "Verified".to_string(),
                Status::Discrepant { .. } => "Discrepant".to_string(),
                other => status_name(other),
            };
            t.push(vec![
                r.label.into(),
                c.alpha.into(),
                c.printed.into(),
                c.adaptive.value.into(),
                c.fixed.value.into(),
                Cell::Text(format!("{gap:.1e}")),
                c.closed.map_or(Cell::Text("-".into()), Cell::Num),
                verdict.clone().into(),
            ]);
            if let Status::Discrepant { .. } = c.verdict {
                notes.push(format!(
                    "discrepant: {} at alpha {}: printed {}, recomputed {}",
                    r.label,
                    c.alpha,
                    fmt_num(c.printed, s.precision),
                    fmt_num(c.adaptive.value, s.precision)
                ));
            }
            cells.push(CellDoc {
                alpha: c.alpha,
                printed: c.printed,
                adaptive: c.adaptive.value,
                fixed: c.fixed.value,
                scheme_gap: gap,
                closed: c.closed,
                verdict,
            });
        }
        docs.push(RowDoc { label: r.label, spec: r.spec.to_text(), cells });
    }
    let ok = rows.iter().filter(|r| reproducible(r)).all(Table2Row::all_verified);
    let kv = to_kv(&Table2Doc { tolerance: fde_core::fde::TABLE2_TOLERANCE, rows: docs })?;
    let mut out = Outcome::ok(Report { summary: vec![], tables: vec![t], notes, kv });
    if !ok {
        out.verdict = Some(CliError::Verdict("uniform or exponential row not verified".into()));
    }
    Ok(out)
}

// bounds

#[derive(Serialize)]
struct CheckDoc {
    draw: usize,
    bound: &'static str,
    check: &'static str,
    spec: String,
    alpha: f64,
    lhs: f64,
    rhs: f64,
    slack: f64,
    tolerance: f64,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
}

#[derive(Serialize)]
struct BoundsDoc {
    seed: u64,
    draws: usize,
    checks: usize,
    holds: usize,
    violated: usize,
    skipped: usize,
    skipped_fraction: f64,
    results: Vec<CheckDoc>,
}

pub fn bounds(args: &crate::args::BoundsArgs, s: &Settings) -> Result<Outcome> {
    let plan = CorpusPlan::new(args.draws, &args.family, &args.op)?;
    let draws = plan.run(s.seed, &s.quadrature)?;
    let all: Vec<_> = draws.iter().flat_map(|d| d.checks.iter().cloned()).collect();
    let sum = SuiteSummary::of(&all);
    let mut t = Table::new(vec!["draw", "bound", "check", "spec", "alpha", "lhs", "rhs", "slack", "verdict", "reason"]);
    let mut results = Vec::new();
    for d in &draws {
        for c in &d.checks {
            let (verdict, reason) = match &c.verdict {
                Verdict::Holds => ("holds", None),
                Verdict::Violated => ("VIOLATED", None),
                Verdict::Skipped(r) => ("skipped", Some(r.clone())),
            };
            t.push(vec![
                d.index.into(),
                d.op.name().into(),
                c.name.into(),
                c.spec.clone().into(),
                c.alpha.into(),
                c.lhs.into(),
                c.rhs.into(),
                c.slack.into(),
                verdict.into(),
                reason.clone().unwrap_or_default().into(),
            ]);
            results.push(CheckDoc {
                draw: d.index,
                bound: d.op.name(),
                check: c.name,
                spec: c.spec.clone(),
                alpha: c.alpha,
                lhs: c.lhs,
                rhs: c.rhs,
                slack: c.slack,
                tolerance: c.tolerance,
                verdict,
                reason,
            });
        }
    }
    let doc = BoundsDoc {
        seed: s.seed,
        draws: draws.len(),
        checks: sum.total(),
        holds: sum.holds,
        violated: sum.violated,
        skipped: sum.skipped,
        skipped_fraction: sum.skipped_fraction(),
        results,
    };
    let summary = vec![
        ("seed".into(), Cell::Text(s.seed.to_string())),
        ("draws".into(), doc.draws.into()),
        ("checks".into(), doc.checks.into()),
        ("holds".into(), doc.holds.into()),
        ("violated".into(), doc.violated.into()),
        ("skipped".into(), doc.skipped.into()),
        ("skipped_fraction".into(), doc.skipped_fraction.into()),
    ];
    let mut out = Outcome::ok(Report { summary, tables: vec![t], notes: vec![], kv: to_kv(&doc)? });
    if sum.violated > 0 {
        out.verdict = Some(CliError::Verdict(format!("{} bound check(s) violated", sum.violated)));
    }
    Ok(out)
}

// velocity

fn solve(solver: SolverArg, nu_m: f64, s: &Settings) -> Result<LagrangePair> {
    Ok(match solver {
        SolverArg::Linear => solve_lagrange_linear(nu_m, &s.quadrature)?,
        SolverArg::Exact => solve_lagrange_exact(nu_m, &s.quadrature)?,
    })
}

fn fit_options(m: &ModelArgs, s: &Settings) -> Result<FitOptions> {
    let mean = match m.mean.as_str() {
        "trapezoid" | "trapezoidal" => MeanEstimator::Trapezoidal,
        "arithmetic" => MeanEstimator::Arithmetic,
        v => match v.parse::<f64>() {
            Ok(x) if x > 0.0 && x < 1.0 => MeanEstimator::Explicit(x),
            _ => {
                return Err(CliError::Usage(format!(
                    "--mean `{v}`: expected trapezoid, arithmetic or a number in (0, 1)"
                )))
            }
        },
    };
    Ok(FitOptions {
        mean,
        cdf: match m.cdf {
            CdfArg::Est6 => CdfModel::Truncated,
            CdfArg::Est3 => CdfModel::Quadrature,
        },
        solver: match m.solver {
            SolverArg::Linear => LagrangeSolver::Linear,
            SolverArg::Exact => LagrangeSolver::Exact,
        },
        quadrature: s.quadrature,
    })
}

fn load_profile(path: &Path) -> Result<Profile> {
    let file = std::fs::File::open(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    read_profile(std::io::BufReader::new(file), &path.display().to_string())
}

#[derive(Serialize)]
struct LagrangeDoc {
    a: f64,
    b: f64,
    nu_m: f64,
    solver: &'static str,
    constraint_residuals: [f64; 2],
}

impl From<&LagrangePair> for LagrangeDoc {
    fn from(l: &LagrangePair) -> Self {
        Self {
            a: l.a,
            b: l.b,
            nu_m: l.nu_m,
            solver: solver_name(l.solver),
            constraint_residuals: [l.constraint_residuals.0, l.constraint_residuals.1],
        }
    }
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct ResidualDoc {
    y_over_M: f64,
    observed: f64,
    computed: f64,
    residual: f64,
}

#[derive(Serialize)]
struct FitDoc {
    k: f64,
    lagrange: LagrangeDoc,
    r2: f64,
    mrae: f64,
    rmse: f64,
    n_points: usize,
    excluded_bed_points: usize,
    nu_m_trapezoidal: f64,
    nu_m_arithmetic: f64,
    cdf_model: &'static str,
    sse: f64,
    k_boundary: &'static str,
    out_of_range_predictions: usize,
    residuals: Vec<ResidualDoc>,
}

fn boundary_name(b: KBoundary) -> &'static str {
    match b {
        KBoundary::Interior => "interior",
        KBoundary::PinnedLow => "pinned at 0 (unconstrained optimum below 0)",
        KBoundary::PinnedHigh => "pinned at 1 (unconstrained optimum above 1)",
    }
}

fn fit_report(r: &FitReport, cdf: CdfModel) -> Result<Report> {
    let doc = FitDoc {
        k: r.k(),
        lagrange: (&r.lagrange).into(),
        r2: r.r2,
        mrae: r.mrae,
        rmse: r.rmse,
        n_points: r.n_points,
        excluded_bed_points: r.excluded_bed_points,
        nu_m_trapezoidal: r.nu_m_trapezoidal,
        nu_m_arithmetic: r.nu_m_arithmetic,
        cdf_model: match cdf {
            CdfModel::Truncated => "est6",
            CdfModel::Quadrature => "est3",
        },
        sse: r.fit.sse,
        k_boundary: boundary_name(r.fit.boundary),
        out_of_range_predictions: r.out_of_range_count(),
        residuals: r
            .points
            .iter()
            .map(|p| ResidualDoc {
                y_over_M: p.y_over_m,
                observed: p.observed,
                computed: p.computed,
                residual: p.residual(),
            })
            .collect(),
    };
    let summary: Vec<(String, Cell)> = vec![
        ("n_points".into(), doc.n_points.into()),
        ("excluded_bed_points".into(), doc.excluded_bed_points.into()),
        ("nu_m".into(), r.lagrange.nu_m.into()),
        ("nu_m_trapezoidal".into(), doc.nu_m_trapezoidal.into()),
        ("nu_m_arithmetic".into(), doc.nu_m_arithmetic.into()),
        ("solver".into(), doc.lagrange.solver.into()),
        ("a".into(), doc.lagrange.a.into()),
        ("b".into(), doc.lagrange.b.into()),
        ("mass_residual".into(), sci(doc.lagrange.constraint_residuals[0])),
        ("mean_residual".into(), sci(doc.lagrange.constraint_residuals[1])),
        ("cdf_model".into(), doc.cdf_model.into()),
        ("k".into(), doc.k.into()),
        ("k_boundary".into(), doc.k_boundary.into()),
        ("r2".into(), doc.r2.into()),
        ("mrae".into(), doc.mrae.into()),
        ("rmse".into(), doc.rmse.into()),
        ("out_of_range_predictions".into(), doc.out_of_range_predictions.into()),
    ];
    let mut t = Table::new(vec!["y_over_M", "observed", "computed", "residual"]);
    for p in &doc.residuals {
        t.push(vec![p.y_over_M.into(), p.observed.into(), p.computed.into(), p.residual.into()]);
    }
    Ok(Report { summary, tables: vec![t], notes: vec![], kv: to_kv(&doc)? })
}

const CURVE_POINTS: usize = 101;

fn model_of(r: &FitReport) -> Result<VelocityModel> {
    Ok(VelocityModel::new(r.lagrange, r.k())?)
}

pub fn chart(kind: PlotKind, r: &FitReport, cdf: CdfModel, s: &Settings) -> Result<Chart> {
    let grid = |i: usize| i as f64 / (CURVE_POINTS - 1) as f64;
    let k = r.k();
    Ok(match kind {
        PlotKind::CdfFit => {
            let mut pts = Vec::new();
            for p in &r.points {
                let f = match cdf {
                    CdfModel::Truncated => cdf_truncated(p.observed, &r.lagrange)?,
                    CdfModel::Quadrature => cdf_quadrature(p.observed, &r.lagrange, &s.quadrature)?,
                };
                pts.push((p.y_over_m, f));
            }
            let curve = (0..CURVE_POINTS).map(|i| (grid(i), if k == 0.0 { 1.0 } else { grid(i).powf(k) })).collect();
            Chart {
                title: format!("Spatial CDF fit, k = {}", fmt_num(k, s.precision)),
                x_label: "y/M".into(),
                y_label: "F".into(),
                x_range: (0.0, 1.0),
                y_range: (0.0, 1.0),
                series: vec![
                    Series { name: "entropy-based CDF at samples".into(), points: pts, style: Style::Markers },
                    Series { name: "(y/M)^k".into(), points: curve, style: Style::Line },
                ],
            }
        }
        PlotKind::Profile => {
            let m = model_of(r)?;
            let obs = r.points.iter().map(|p| (p.observed, p.y_over_m)).collect();
            let curve = (0..CURVE_POINTS)
                .filter_map(|i| predict_velocity(grid(i), &m).ok().map(|v| (v.nu_hat, grid(i))))
                .collect();
            profile_chart(obs, curve, k, s.precision)
        }
        PlotKind::Regression => Chart {
            title: format!("Observed vs computed, R² = {}", fmt_num(r.r2, s.precision)),
            x_label: "observed ν/ν_max".into(),
            y_label: "computed ν/ν_max".into(),
            x_range: (0.0, 1.0),
            y_range: (0.0, 1.0),
            series: vec![
                Series {
                    name: "samples".into(),
                    points: r.points.iter().map(|p| (p.observed, p.computed)).collect(),
                    style: Style::Markers,
                },
                Series { name: "identity".into(), points: vec![(0.0, 0.0), (1.0, 1.0)], style: Style::Dashed },
            ],
        },
    })
}

fn profile_chart(obs: Vec<(f64, f64)>, curve: Vec<(f64, f64)>, k: f64, precision: usize) -> Chart {
    let mut series = Vec::new();
    if !obs.is_empty() {
        series.push(Series { name: "observed".into(), points: obs, style: Style::Markers });
    }
    series.push(Series { name: "model".into(), points: curve, style: Style::Line });
    Chart {
        title: format!("Velocity profile, k = {}", fmt_num(k, precision)),
        x_label: "ν/ν_max".into(),
        y_label: "y/M".into(),
        x_range: (0.0, 1.0),
        y_range: (0.0, 1.0),
        series,
    }
}

pub fn velocity_fit(args: &FitArgs, s: &Settings) -> Result<Outcome> {
    let profile = load_profile(&args.input)?;
    let opts = fit_options(&args.model, s)?;
    let r = run_validation(&profile, &opts)?;
    let mut out = Outcome::ok(fit_report(&r, opts.cdf)?);
    if let Some(dir) = &args.plot_dir {
        for (kind, name) in [
            (PlotKind::CdfFit, "cdf_fit.svg"),
            (PlotKind::Profile, "profile.svg"),
            (PlotKind::Regression, "regression.svg"),
        ] {
            out.files.push((dir.join(name), chart(kind, &r, opts.cdf, s)?.to_svg()));
        }
    }
    Ok(out)
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct PredictRow {
    y_over_M: f64,
    nu_hat: f64,
    out_of_range: bool,
}

#[derive(Serialize)]
struct PredictDoc {
    k: f64,
    lagrange: LagrangeDoc,
    profile: Vec<PredictRow>,
}

pub fn velocity_predict(args: &PredictArgs, s: &Settings) -> Result<Outcome> {
    if args.points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let lag = solve(args.solver, args.nu_m, s)?;
    let model = VelocityModel::new(lag, args.k)?;
    let mut rows = Vec::with_capacity(args.points);
    for i in 0..args.points {
        let y = i as f64 / (args.points - 1) as f64;
        let p = predict_velocity(y, &model)?;
        rows.push(PredictRow { y_over_M: y, nu_hat: p.nu_hat, out_of_range: p.out_of_range });
    }
    let doc = PredictDoc { k: args.k, lagrange: (&lag).into(), profile: rows };
    let summary: Vec<(String, Cell)> = vec![
        ("nu_m".into(), lag.nu_m.into()),
        ("solver".into(), doc.lagrange.solver.into()),
        ("a".into(), lag.a.into()),
        ("b".into(), lag.b.into()),
        ("mass_residual".into(), sci(lag.constraint_residuals.0)),
        ("mean_residual".into(), sci(lag.constraint_residuals.1)),
        ("k".into(), args.k.into()),
    ];
    let mut t = Table::new(vec!["y_over_M", "nu_hat", "out_of_range"]);
    for r in &doc.profile {
        t.push(vec![r.y_over_M.into(), r.nu_hat.into(), r.out_of_range.into()]);
    }
    let mut out = Outcome::ok(Report { summary, tables: vec![t], notes: vec![], kv: to_kv(&doc)? });
    if let Some(path) = &args.plot {
        let curve = doc.profile.iter().map(|r| (r.nu_hat, r.y_over_M)).collect();
        out.files.push((path.clone(), profile_chart(Vec::new(), curve, args.k, s.precision).to_svg()));
    }
    Ok(out)
}

pub fn plot(args: &PlotArgs, s: &Settings) -> Result<Outcome> {
    let profile = load_profile(&args.input)?;
    let opts = fit_options(&args.model, s)?;
    let r = run_validation(&profile, &opts)?;
    let svg = chart(args.kind, &r, opts.cdf, s)?.to_svg();
    let mut out = Outcome::ok(Report { summary: vec![], tables: vec![], notes: vec![], kv: String::new() });
    out.raw = Some(svg);
    Ok(out)
}
