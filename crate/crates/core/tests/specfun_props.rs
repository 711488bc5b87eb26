use fde_core::specfun::{complete_beta, gamma, generalized_exp_integral, misra, upper_incomplete_gamma};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn exp_integral_matches_incomplete_gamma(m in -1.0f64..=1.0, n in 1e-3f64..=10.0) {
        prop_assume!((1.0 - m).abs() > 1e-9);
        let e = generalized_exp_integral(m, n).unwrap().value;
        let g = n.powf(m - 1.0) * upper_incomplete_gamma(1.0 - m, n).unwrap().value;
        prop_assert!(rel(e, g) <= 1e-12, "m={m} n={n}: {e} vs {g}");
    }

    #[test]
    fn incomplete_gamma_recurrence(s in 0.05f64..=6.0, x in 0.0f64..=30.0) {
        let lhs = upper_incomplete_gamma(s + 1.0, x).unwrap().value;
        let rhs = s * upper_incomplete_gamma(s, x).unwrap().value + x.powf(s) * (-x).exp();
        prop_assert!(rel(lhs, rhs) <= 1e-12, "s={s} x={x}: {lhs} vs {rhs}");
    }

    #[test]
    fn incomplete_gamma_decreasing(s in 0.1f64..=5.0, x in 0.0f64..=20.0, dx in 1e-3f64..=2.0) {
        let a = upper_incomplete_gamma(s, x).unwrap().value;
        let b = upper_incomplete_gamma(s, x + dx).unwrap().value;
        prop_assert!(b < a);
    }

    #[test]
    fn beta_symmetric(m in 0.05f64..=20.0, n in 0.05f64..=20.0) {
        let a = complete_beta(m, n).unwrap().value;
        let b = complete_beta(n, m).unwrap().value;
        prop_assert!(rel(a, b) <= 1e-14);
    }

    #[test]
    fn misra_is_exp_integral_of_negated_order(m in -0.9f64..=2.0, x in 0.01f64..=10.0) {
        prop_assert_eq!(misra(m, x).unwrap().value, generalized_exp_integral(-m, x).unwrap().value);
    }

    #[test]
    fn incomplete_gamma_at_zero_is_gamma(s in 0.05f64..=10.0) {
        prop_assert!(rel(upper_incomplete_gamma(s, 0.0).unwrap().value, gamma(s)) <= 1e-13);
    }
}

#[test]
fn negative_argument_needs_integer_order() {
    assert!(upper_incomplete_gamma(1.5, -0.5).is_err());
    let v = upper_incomplete_gamma(2.0, -0.5).unwrap().value;
    assert!(rel(v, 0.5f64.exp() * 0.5) < 1e-14);
}
