use approx::assert_abs_diff_eq;
use gfvc::gfc1d::*;
use gfvc::kernels::{KernelFamily, KernelPair};
use gfvc::QuadSpec;
use std::sync::Arc;

fn p(text: &str) -> ProfileRef {
    ExprProfile::parse(text).unwrap()
}

fn rl(a: f64) -> KernelPair {
    KernelPair::power_rl(a).unwrap()
}

const H15_AT_1: f64 = 1.1283791670955126;

#[test]
fn gfi_examples() {
    let s = QuadSpec::default();
    assert_abs_diff_eq!(gfi(&rl(0.5), &p("1"), 1.0, &s).unwrap(), H15_AT_1, epsilon = 1e-12);
    assert_abs_diff_eq!(gfi(&KernelPair::classical(), &p("x"), 2.0, &s).unwrap(), 2.0, epsilon = 1e-13);
    assert_abs_diff_eq!(gfi(&rl(0.5), &p("x^(-0.5)/sqrt(3.141592653589793)"), 1.0, &s).unwrap(), 1.0, epsilon = 1e-12);
}

#[test]
fn gfd_examples() {
    let s = QuadSpec::default();
    let k = rl(0.5);
    assert_abs_diff_eq!(gfd_caputo(&k, &p("x"), 1.0, &s).unwrap(), H15_AT_1, epsilon = 1e-12);
    assert_eq!(gfd_caputo(&k, &p("3.5"), 0.7, &s).unwrap(), 0.0);
    assert_abs_diff_eq!(gfd_caputo(&k, &p("x^2"), 1.0, &s).unwrap(), 1.5045055561273500, epsilon = 1e-12);
    assert_abs_diff_eq!(gfd_rl(&k, &p("1"), 1.0, &s).unwrap(), 0.5641895835477563, epsilon = 1e-14);
    assert_abs_diff_eq!(gfd_rl(&k, &p("x"), 1.0, &s).unwrap(), H15_AT_1, epsilon = 1e-12);
    assert_abs_diff_eq!(gfd_rl(&KernelPair::classical(), &p("x^2"), 3.0, &s).unwrap(), 6.0, epsilon = 1e-13);
    assert!(gfd_rl(&k, &p("x^(-0.5)"), 1.0, &s).is_err());
}

#[test]
fn interval_examples() {
    let s = QuadSpec::default();
    let k = rl(0.5);
    assert_abs_diff_eq!(gfi_interval(&k, &p("1"), 0.0, 1.0, &s).unwrap(), H15_AT_1, epsilon = 1e-12);
    assert_abs_diff_eq!(gfi_interval(&k, &p("1"), 1.0, 0.0, &s).unwrap(), -H15_AT_1, epsilon = 1e-12);
    assert_eq!(gfi_interval(&k, &p("x"), 0.4, 0.4, &s).unwrap(), 0.0);
    assert_abs_diff_eq!(gfd_interval(&k, &p("x"), 0.0, 1.0, &s).unwrap(), H15_AT_1, epsilon = 1e-12);
    assert_eq!(gfd_interval(&k, &p("2"), 0.3, 0.9, &s).unwrap(), 0.0);
}

#[test]
fn additivity_examples() {
    let s = QuadSpec::default();
    let r = additivity_residual(&rl(0.5), &p("x"), 0.0, 0.5, 1.0, &s).unwrap();
    assert!(r.gfi < 1e-9 && r.gfd < 1e-9);
    let r = additivity_residual(&KernelPair::classical(), &p("x^2"), 1.0, 2.0, 3.0, &s).unwrap();
    assert!(r.gfi < 1e-10 && r.gfd < 1e-10);
    let b = KernelPair::with(KernelFamily::BesselPair, &[("alpha", 0.5)]).unwrap();
    let r = additivity_residual(&b, &p("1"), 0.2, 0.7, 1.5, &s).unwrap();
    assert!(r.gfi < 1e-7 && r.gfd < 1e-7);
}

#[test]
fn fundamental_theorem_examples() {
    let s = QuadSpec::default();
    let r = ft_residuals(&rl(0.5), &p("x^2"), 0.0, 1.0, &s).unwrap();
    assert!(r.ft2 < 1e-6, "{r:?}");
    let c = ft2_residual(&KernelPair::classical(), &p("x^3"), 0.5, 2.0, &s).unwrap();
    assert!(c < 1e-8);
    let f1 = ft1_residual(&rl(0.5), &p("1"), 1.0, &s).unwrap();
    assert!(f1 < 1e-6, "{f1}");
}

#[test]
fn leibniz_and_semigroup_examples() {
    let s = QuadSpec::default();
    let k = rl(0.5);
    let d = leibniz_defect(&k, &p("x"), &p("x"), 1.0, &s).unwrap();
    assert_abs_diff_eq!(d, -0.7522527780636752, epsilon = 1e-10);
    let d = leibniz_defect(&KernelPair::classical(), &p("sin(x)"), &p("x^2+1"), 0.8, &s).unwrap();
    assert_abs_diff_eq!(d, 0.0, epsilon = 1e-10);
    let d = leibniz_defect(&k, &p("x"), &p("1"), 1.0, &s).unwrap();
    assert_abs_diff_eq!(d, 0.0, epsilon = 1e-8);

    let g = semigroup_defect(&k, &p("x^0.5"), 1.0, &s).unwrap();
    assert_abs_diff_eq!(g, -0.5, epsilon = 1e-6);
    let g = semigroup_defect(&k, &p("x"), 1.0, &s).unwrap();
    assert_abs_diff_eq!(g, 0.0, epsilon = 1e-6);
    let g = semigroup_defect(&KernelPair::classical(), &p("x^3"), 1.0, &s).unwrap();
    assert_abs_diff_eq!(g, 0.0, epsilon = 1e-8);
}

#[test]
fn rl_interval_composition_does_not_reproduce_differences() {
    let s = QuadSpec::default();
    let k = rl(0.5);
    let big = gfi_profile(&k, p("1"), &s.tightened()).unwrap();
    let r = rl_interval_ft2_residual(&k, &big, 0.5, 1.0, &s).unwrap();
    let expected = (1.0 - 0.5f64.sqrt()) / specfun::gamma(1.5).unwrap();
    assert_abs_diff_eq!(r, expected, epsilon = 1e-8);
    assert!(r > 0.1);
}

#[test]
fn fd_fallback_is_flagged() {
    let f: ProfileRef = Arc::new(FnProfile::new(|t| Ok(t * t), 2.0));
    let d = f.derivative().unwrap();
    assert!(d.is_approximate());
    assert_abs_diff_eq!(d.value(0.7).unwrap(), 1.4, epsilon = 1e-8);
    assert!(check_derivative(&*p("x^3 + sin(x)"), &[0.3, 0.9, 1.7]).unwrap() < 1e-6);
}
