use approx::assert_relative_eq;
use proptest::prelude::*;
use specfun::*;

#[test]
fn gamma_recurrence_on_grid() {
    for i in 1..=100 {
        let x = 0.1 * i as f64;
        let lhs = gamma(x + 1.0).unwrap();
        let rhs = x * gamma(x).unwrap();
        assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
    }
}

#[test]
fn half_order_bessel_closed_forms() {
    let mut x: f64 = 0.05;
    while x <= 20.0 {
        let pref = (2.0 / (std::f64::consts::PI * x)).sqrt();
        assert!((bessel_j(0.5, x).unwrap() - pref * x.sin()).abs() < 1e-10);
        let i_plus = pref * x.sinh();
        let i_minus = pref * x.cosh();
        assert_relative_eq!(bessel_i(0.5, x).unwrap(), i_plus, max_relative = 1e-10);
        assert_relative_eq!(bessel_i(-0.5, x).unwrap(), i_minus, max_relative = 1e-10);
        x += 0.25;
    }
}

proptest! {
    #[test]
    fn ml_first_order_is_exponential(z in -5.0f64..5.0) {
        let v = mittag_leffler(1.0, 1.0, z).unwrap().value;
        prop_assert!((v - z.exp()).abs() <= 1e-10 * z.exp());
    }

    #[test]
    fn kummer_equal_parameters_is_exponential(b in 0.05f64..3.0, z in -8.0f64..8.0) {
        let v = kummer(b, b, z).unwrap().value;
        prop_assert!((v - z.exp()).abs() <= 1e-10 * z.exp());
    }

    #[test]
    fn lower_incomplete_gamma_monotone(beta in 0.05f64..5.0, t in 0.0f64..30.0, dt in 0.0f64..5.0) {
        let a = lower_incomplete_gamma(beta, t).unwrap();
        let b = lower_incomplete_gamma(beta, t + dt).unwrap();
        prop_assert!(b >= a * (1.0 - 1e-14));
    }

    #[test]
    fn lower_incomplete_gamma_first_order(t in 0.0f64..40.0) {
        let v = lower_incomplete_gamma(1.0, t).unwrap();
        prop_assert!((v - (1.0 - (-t).exp())).abs() <= 1e-14);
    }

    #[test]
    fn erfc_reflection(z in -8.0f64..8.0) {
        prop_assert!((erfc(z) + erfc(-z) - 2.0).abs() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn ml_error_claim_covers_exponential(z in -6.0f64..6.0) {
        let r = mittag_leffler(1.0, 1.0, z).unwrap();
        prop_assert!((r.value - z.exp()).abs() <= r.est_abs_error + 2.0 * f64::EPSILON * z.exp());
    }
}
