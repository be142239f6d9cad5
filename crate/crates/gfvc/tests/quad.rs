use approx::assert_relative_eq;
use gfvc::quad::{convolve, integrate_regular, integrate_singular, PowerKernel, QuadSpec};
use gfvc::Result;
use proptest::prelude::*;
use specfun::{gamma, rgamma};

fn h(a: f64, t: f64) -> f64 {
    t.powf(a - 1.0) * rgamma(a)
}

fn power_conv(alpha: f64, beta: f64, x: f64, spec: &QuadSpec) -> Result<f64> {
    let g = move |_u: f64| Ok(rgamma(alpha));
    let k = PowerKernel {
        exponent: alpha - 1.0,
        smoothness: 1.0,
        regular: &g,
    };
    Ok(convolve(&k, &|t| Ok(h(beta, t)), beta - 1.0, x, spec)?.value)
}

#[test]
fn spec_examples() {
    let s = QuadSpec::default();
    assert_relative_eq!(power_conv(0.5, 1.0, 1.0, &s).unwrap(), 1.1283791670955126, max_relative = 1e-13);
    assert_relative_eq!(power_conv(0.5, 0.5, 1.0, &s).unwrap(), 1.0, max_relative = 1e-13);
    let one = |_u: f64| Ok(1.0);
    let classical = PowerKernel {
        exponent: 0.0,
        smoothness: 1.0,
        regular: &one,
    };
    assert_relative_eq!(convolve(&classical, &|t| Ok(t), 0.0, 2.0, &s).unwrap().value, 2.0, max_relative = 1e-14);
    assert_relative_eq!(integrate_regular(&|x| Ok(x * x), 0.0, 1.0, &s).unwrap().value, 1.0 / 3.0, max_relative = 1e-14);
    assert_relative_eq!(integrate_regular(&|x: f64| Ok(x.sin()), 0.0, std::f64::consts::PI, &s).unwrap().value, 2.0, max_relative = 1e-13);
    let f = |x: f64| Ok((1.0 - x).powf(-0.5) / std::f64::consts::PI.sqrt());
    let r = integrate_singular(&f, 0.0, 1.0, 0.0, -0.5, &s).unwrap();
    assert_relative_eq!(r.value, 1.1283791670955126, max_relative = 1e-13);
}

#[test]
fn power_law_family() {
    let s = QuadSpec::default();
    for alpha in [0.25, 0.5, 0.75] {
        for beta in [0.25, 0.5, 0.75] {
            for x in [0.5, 1.0, 3.0] {
                let got = power_conv(alpha, beta, x, &s).unwrap();
                assert_relative_eq!(got, h(alpha + beta, x), max_relative = 1e-8);
            }
        }
    }
}

#[test]
fn non_smooth_endpoint_behaviour() {
    // int_0^1 (1-t)^-0.5 t^0.3 dt = B(0.5, 1.3) with the t^0.3 factor left undeclared
    let s = QuadSpec::default();
    let exact = gamma(0.5).unwrap() * gamma(1.3).unwrap() / gamma(1.8).unwrap();
    let r = integrate_singular(&|t: f64| Ok(t.powf(0.3) * (1.0 - t).powf(-0.5)), 0.0, 1.0, 0.0, -0.5, &s).unwrap();
    assert_relative_eq!(r.value, exact, max_relative = 1e-10);
    assert!(r.est_error < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linearity(a in -3.0f64..3.0, b in -3.0f64..3.0, x in 0.1f64..4.0) {
        let s = QuadSpec::default();
        let g = |_u: f64| Ok(rgamma(0.5));
        let k = PowerKernel { exponent: -0.5, smoothness: 1.0, regular: &g };
        let f = |t: f64| Ok(t.cos());
        let hh = |t: f64| Ok(t * t + 1.0);
        let combo = |t: f64| Ok(a * t.cos() + b * (t * t + 1.0));
        let lhs = convolve(&k, &combo, 0.0, x, &s).unwrap().value;
        let rhs = a * convolve(&k, &f, 0.0, x, &s).unwrap().value + b * convolve(&k, &hh, 0.0, x, &s).unwrap().value;
        let tol = 2.0 * s.abs_tol.max(s.rel_tol * lhs.abs()) * (1.0 + a.abs() + b.abs());
        prop_assert!((lhs - rhs).abs() <= tol, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn halving_tolerance_does_not_hurt(ai in 0usize..3, bi in 0usize..3, xi in 0usize..3, tol_exp in 4i32..10) {
        let grid = [0.25, 0.5, 0.75];
        let xs = [0.5, 1.0, 3.0];
        let (alpha, beta, x) = (grid[ai], grid[bi], xs[xi]);
        let tol = 10f64.powi(-tol_exp);
        let coarse = QuadSpec { abs_tol: tol, rel_tol: tol, nodes_per_panel: 4, ..Default::default() };
        let fine = QuadSpec { abs_tol: tol / 2.0, rel_tol: tol / 2.0, ..coarse };
        let exact = h(alpha + beta, x);
        let e1 = (power_conv(alpha, beta, x, &coarse).unwrap() - exact).abs();
        let e2 = (power_conv(alpha, beta, x, &fine).unwrap() - exact).abs();
        prop_assert!(e2 <= e1 + 4.0 * f64::EPSILON * exact, "{} > {}", e2, e1);
    }
}
