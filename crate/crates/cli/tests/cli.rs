use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fde(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fde")).args(args).output().expect("run fde")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(name)
}

#[test]
fn entropy_reference_cells() {
    let o = fde(&["entropy", "uniform:A=0,B=2", "--alpha", "0.9"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("0.7190") && s.contains("Verified"), "{s}");

    let o = fde(&["entropy", "exponential:lambda=1", "--alpha", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("1.0000"));
}

#[test]
fn complex_domain_exits_two_unless_allowed() {
    let o = fde(&["entropy", "uniform:A=0,B=0.5", "--alpha", "0.5"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("ComplexDomain"));

    let o = fde(&["entropy", "uniform:A=0,B=0.5", "--alpha", "0.5", "--allow-shannon-only", "--format", "kv"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    let h: f64 = s.lines().find_map(|l| l.strip_prefix("shannon_entropy = ")).unwrap().parse().unwrap();
    assert!((h - 0.5f64.ln()).abs() < 1e-10, "{s}");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&fde(&["entropy", "nosuch:x=1", "--alpha", "0.5"])), 1);
    assert_eq!(code(&fde(&["entropy"])), 1);
    assert_eq!(code(&fde(&["--precision", "40", "table2"])), 1);
    assert_eq!(code(&fde(&["bounds", "--family", "nosuch"])), 1);
    assert_eq!(code(&fde(&["--help"])), 0);
}

#[test]
fn invalid_order_is_a_domain_error() {
    assert_eq!(code(&fde(&["entropy", "uniform:A=0,B=2", "--alpha", "1.5"])), 2);
}

#[test]
fn table2_matches_golden_csv() {
    let o = fde(&["table2", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let golden = std::fs::read_to_string(data("golden/table2.csv")).unwrap();
    assert_eq!(stdout(&o), golden);
}

#[test]
fn table2_text_lists_discrepancies() {
    let s = stdout(&fde(&["table2"]));
    assert!(s.contains("discrepant: Weibull (a=1, b=2) at alpha 0.9: printed 0.2389, recomputed 0.6050"), "{s}");
}

#[test]
fn bounds_single_family_and_seed_reproducible() {
    let args = ["bounds", "--seed", "9", "--draws", "30", "--family", "uniform", "--format", "csv"];
    let a = fde(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, fde(&args).stdout);
    let s = stdout(&a);
    assert!(s.lines().skip(1).all(|l| l.contains("uniform:")), "{s}");
}

#[test]
fn missing_profile_exits_one() {
    let o = fde(&["velocity", "fit", "/nonexistent/profile.csv"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/profile.csv"));
}

#[test]
fn malformed_profile_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.csv");
    std::fs::write(&p, "y_over_M,velocity\n0.2,0.5\n0.4,abc\n").unwrap();
    let o = fde(&["velocity", "fit", p.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.csv:3:"));
}

#[test]
fn velocity_fit_writes_report_and_plots() {
    let dir = tempfile::tempdir().unwrap();
    let plots = dir.path().join("plots");
    let input = data("data/profile.csv");
    let o = fde(&["velocity", "fit", input.to_str().unwrap(), "--format", "kv", "--plot-dir", plots.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let doc: toml::Table = stdout(&o).parse().unwrap();
    for key in ["k", "lagrange", "r2", "mrae", "rmse", "n_points", "residuals"] {
        assert!(doc.contains_key(key), "missing {key}");
    }
    assert!(doc["r2"].as_float().unwrap() > 0.95);
    for f in ["cdf_fit.svg", "profile.svg", "regression.svg"] {
        let svg = std::fs::read_to_string(plots.join(f)).unwrap();
        assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }
}

#[test]
fn exact_solver_does_not_converge() {
    let input = data("data/profile.csv");
    let o = fde(&["velocity", "fit", input.to_str().unwrap(), "--solver", "exact"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn predict_centre_case_is_square_root() {
    let o = fde(&["velocity", "predict", "--nu-m", "0.6667", "--k", "1", "--points", "11", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    let mut rows = 0;
    for l in s.lines().skip(1) {
        let f: Vec<f64> = l.split(',').take(2).map(|c| c.parse().unwrap()).collect();
        assert!((f[1] - f[0].sqrt()).abs() <= 1e-3, "{l}");
        rows += 1;
    }
    assert_eq!(rows, 11);
}

#[test]
fn bed_row_is_zero_below_centre_mean() {
    let s = stdout(&fde(&["velocity", "predict", "--nu-m", "0.6", "--k", "0.7", "--points", "5", "--format", "csv"]));
    assert!(s.lines().nth(1).unwrap().starts_with("0.0000,0.0000,"), "{s}");
}

#[test]
fn predict_half_mean_is_degenerate() {
    assert_eq!(code(&fde(&["velocity", "predict", "--nu-m", "0.5", "--k", "0.5"])), 2);
}

#[test]
fn plot_kinds_are_svg() {
    let input = data("data/profile.csv");
    for kind in ["cdf-fit", "profile", "regression"] {
        let o = fde(&["plot", kind, input.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{kind}");
        let s = stdout(&o);
        assert!(s.contains("<svg") && s.contains("</svg>"), "{kind}");
    }
    let s = stdout(&fde(&["plot", "regression", input.to_str().unwrap()]));
    assert!(s.contains("identity"));
}

#[test]
fn config_file_sets_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("fde.toml");
    std::fs::write(&cfg, "precision = 6\nformat = \"csv\"\n").unwrap();
    let c = cfg.to_str().unwrap();
    let s = stdout(&fde(&["--config", c, "entropy", "exponential:lambda=1", "--alpha", "0.9"]));
    assert!(s.contains("0.961"), "{s}");
    assert!(s.lines().any(|l| l.starts_with("value,0.961") && l.len() == "value,0.961xxx".len()), "{s}");
    let s = stdout(&fde(&["--config", c, "--precision", "2", "entropy", "exponential:lambda=1", "--alpha", "0.9"]));
    assert!(s.contains("value,0.96\n"), "{s}");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.txt");
    let o = fde(&["--out", out.to_str().unwrap(), "entropy", "uniform:A=0,B=2", "--alpha", "0.6"]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(out).unwrap().contains("0.8026"));
}
