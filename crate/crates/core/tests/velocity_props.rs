use fde_core::velocity::*;
use fde_core::{Alpha, QuadratureConfig};
use proptest::prelude::*;

fn pair(a: f64, b: f64, nu_m: f64) -> LagrangePair {
    LagrangePair { a, b, nu_m, solver: Solver::LinearTruncated, constraint_residuals: (f64::NAN, f64::NAN) }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn half_order_root_solves_quadratic(x in -50.0f64..50.0) {
        let y = solve_stationarity(x, Alpha::new(0.5).unwrap()).unwrap();
        let q = y * y - y * (1.0 + x * x) + 0.25;
        prop_assert!(q.abs() <= 1e-12 * (1.0 + y * y + y * x * x), "x={x}: {q}");
    }

    #[test]
    fn root_product_is_a_quarter(x in -1e3f64..1e3) {
        let (p, m) = quadratic_roots(x);
        prop_assert!((p * m - 0.25).abs() <= 1e-12);
        prop_assert!(p > 0.0 && m > 0.0);
    }

    #[test]
    fn shannon_order_is_affine(x in -0.999f64..100.0) {
        prop_assert_eq!(solve_stationarity(x, Alpha::SHANNON).unwrap(), 1.0 + x);
    }

    #[test]
    fn stationarity_root_has_zero_residual(x in -30.0f64..30.0, a in 0.05f64..0.99) {
        let al = Alpha::new(a).unwrap();
        let y = solve_stationarity(x, al).unwrap();
        let scale = y.powf(a) + a * y.powf(a - 1.0);
        prop_assert!(stationarity_residual(y, x, al).unwrap().abs() <= 1e-13 * scale.max(1.0));
    }

    #[test]
    fn two_term_series_keeps_dropped_terms(a in -0.9f64..0.9, b in -0.9f64..0.9, v in 0.0f64..=1.0) {
        prop_assume!(b.abs() > 0.05 && (a + b * v).abs() < 1.0);
        let p = pair(a, b, 0.6);
        let s = cdf_series(v, &p, SeriesOrder::TWO_TERM, false).unwrap().value;
        let t = cdf_truncated(v, &p).unwrap();
        let x = a + b * v;
        let dropped = (-0.5f64).exp() / b * (b * v - (x.powi(3) - a.powi(3)) / 6.0);
        prop_assert!((s - t - dropped).abs() <= 1e-14 * (1.0 + dropped.abs()));
    }

    #[test]
    fn velocity_nondecreasing_in_height(a in -2.0f64..=0.0, b in -8.0f64..-0.01, k in 0.01f64..=1.0,
                                        r1 in 0.0f64..=1.0, r2 in 0.0f64..=1.0) {
        let m = VelocityModel { lagrange: pair(a, b, 0.6), k, branch: Branch::MinusRoot };
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let vl = predict_velocity(lo, &m).unwrap().nu_hat;
        let vh = predict_velocity(hi, &m).unwrap().nu_hat;
        prop_assert!(vh >= vl - 1e-15);
    }

    #[test]
    fn surface_velocity_inverts_truncated_cdf(nu_m in 0.51f64..0.95, k in 0.05f64..=1.0) {
        let (a, b) = lagrange_linear_ab(nu_m).unwrap();
        let m = VelocityModel::new(pair(a, b, nu_m), k).unwrap();
        let v = predict_velocity(1.0, &m).unwrap().nu_hat;
        prop_assert!((cdf_truncated(v, &m.lagrange).unwrap() - 1.0).abs() <= 1e-12);
        prop_assert!((v - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn linear_multipliers_satisfy_their_equations(nu_m in 0.01f64..0.99) {
        prop_assume!((nu_m - 0.5).abs() > 1e-6);
        let (a, b) = lagrange_linear_ab(nu_m).unwrap();
        prop_assert!((b + 2.0 * a + C0).abs() <= 1e-13);
        prop_assert!((3.0 * a + 2.0 * b + 3.0 * C0 * nu_m).abs() <= 1e-13);
    }
}

#[test]
fn plus_root_density_is_shannon_exponential_at_order_one() {
    // y = 1 + x gives f = e^{-1} e^{-(a + bν̂)}.
    for x in [-0.5, 0.0, 0.7, 3.0] {
        let y = solve_stationarity(x, Alpha::SHANNON).unwrap();
        assert!(((-y).exp() - (-1.0f64).exp() * (-x).exp()).abs() < 1e-16);
    }
}

#[test]
fn series_converges_to_quadrature_inside_validity_region() {
    let cfg = QuadratureConfig::default();
    for (a, b) in [(0.1, 0.3), (-0.4, 0.9), (0.5, -0.6), (-0.2, -0.7)] {
        let p = pair(a, b, 0.6);
        for v in [0.25, 0.5, 1.0] {
            let s = cdf_series(v, &p, SeriesOrder { i_max: 8, k_max: 8 }, false).unwrap().value;
            let q = cdf_quadrature(v, &p, &cfg).unwrap();
            assert!((s - q).abs() <= 1e-6, "a={a} b={b} v={v}: {s} vs {q}");
        }
    }
}

#[test]
fn half_mean_is_degenerate() {
    assert!(matches!(
        solve_lagrange_linear(0.5, &QuadratureConfig::default()),
        Err(fde_core::Error::DegenerateMean { .. })
    ));
    assert!(matches!(
        predict_velocity(0.5, &VelocityModel { lagrange: pair(0.3, 0.0, 0.5), k: 0.5, branch: Branch::MinusRoot }),
        Err(fde_core::Error::DegenerateMultiplier)
    ));
}
