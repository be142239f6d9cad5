use gfvc::kernels::{catalog, KernelFamily, KernelPair, Side, SONIN_SAMPLES};
use gfvc::QuadSpec;

fn pair(family: KernelFamily) -> KernelPair {
    KernelPair::new(family, &family.catalog_params()).unwrap()
}

#[test]
fn power_rl_pairs_are_exact() {
    let spec = QuadSpec::default();
    for alpha in [0.25, 0.5, 0.75] {
        let r = KernelPair::power_rl(alpha).unwrap().sonin_residual(&SONIN_SAMPLES, &spec).unwrap();
        assert!(r.max_abs_residual < 1e-10, "alpha {alpha}: {r:?}");
    }
}

#[test]
fn enabled_catalog_passes_and_mittag_leffler_is_disabled() {
    let spec = QuadSpec::default();
    for e in catalog(&spec) {
        let r = e.report.expect("every catalog pair produces a report");
        if e.family == KernelFamily::MittagLefflerPair {
            assert!(!e.enabled);
            // the printed pair convolves to -1 instead of 1
            assert!((r.max_abs_residual - 2.0).abs() < 1e-6, "{r:?}");
        } else {
            assert!(e.enabled, "{:?}: {r:?}", e.family);
            assert!(r.max_abs_residual < 1e-7);
        }
    }
}

#[test]
fn spec_sample_sets() {
    let spec = QuadSpec::default();
    let b = KernelPair::with(KernelFamily::BesselPair, &[("alpha", 0.5)]).unwrap();
    assert!(b.sonin_residual(&[0.5, 1.0, 2.0], &spec).unwrap().max_abs_residual < 1e-7);
    let h = KernelPair::with(KernelFamily::HanygaPair, &[("alpha", 0.3), ("beta", 0.7)]).unwrap();
    assert!(h.sonin_residual(&[1.0], &spec).unwrap().max_abs_residual < 1e-7);
    assert!(h.sonin_residual(&[], &spec).is_err());
    assert!(h.sonin_residual(&[0.0], &spec).is_err());
}

#[test]
fn swapped_pairs_pass() {
    let spec = QuadSpec::default();
    for family in KernelFamily::ALL {
        if family == KernelFamily::MittagLefflerPair {
            continue;
        }
        let r = pair(family).swapped().sonin_residual(&SONIN_SAMPLES, &spec).unwrap();
        assert!(r.max_abs_residual < 1e-7, "{family}: {r:?}");
    }
}

#[test]
fn erfc_pair_is_sonin_only_at_unit_lambda() {
    let spec = QuadSpec::default();
    let e = KernelPair::with(KernelFamily::ErfcPair, &[("lambda", 2.0)]).unwrap();
    assert!(e.sonin_residual(&SONIN_SAMPLES, &spec).unwrap().max_abs_residual > 1e-3);
    assert!(KernelPair::verified(KernelFamily::ErfcPair, &e.params().clone(), &spec).is_err());
}

#[test]
fn damped_power_tends_to_power_rl() {
    let rl = KernelPair::power_rl(0.5).unwrap();
    let mut prev = f64::INFINITY;
    for lambda in [1e-2, 1e-4] {
        let d = KernelPair::with(KernelFamily::DampedPower, &[("alpha", 0.5), ("lambda", lambda)]).unwrap();
        let mut dev = 0.0f64;
        for i in 1..=100 {
            let t = 0.1 * i as f64;
            for side in [Side::M, Side::K] {
                dev = dev.max((d.eval(side, t).unwrap() - rl.eval(side, t).unwrap()).abs());
            }
        }
        assert!(dev < prev);
        prev = dev;
    }
    assert!(prev < 1e-3);
    let zero = KernelPair::with(KernelFamily::DampedPower, &[("alpha", 0.5), ("lambda", 0.0)]).unwrap();
    for i in 1..=100 {
        let t = 0.1 * i as f64;
        assert_eq!(zero.eval(Side::M, t).unwrap(), rl.eval(Side::M, t).unwrap());
    }
}

#[test]
fn bessel_half_order_closed_form() {
    let b = KernelPair::with(KernelFamily::BesselPair, &[("alpha", 0.5)]).unwrap();
    for t in [0.01, 0.3, 1.0, 4.0, 9.0] {
        let pi_t = (std::f64::consts::PI * t).sqrt();
        let m = (2.0 * t.sqrt()).cos() / pi_t;
        let k = (2.0 * t.sqrt()).cosh() / pi_t;
        assert!((b.eval(Side::M, t).unwrap() - m).abs() < 1e-12 * m.abs().max(1.0));
        assert!((b.eval(Side::K, t).unwrap() - k).abs() < 1e-12 * k.max(1.0));
    }
}

#[test]
fn scaled_slope_matches_finite_differences() {
    // p g + u g' against a difference quotient of u^-p kernel
    for family in KernelFamily::ALL {
        if family == KernelFamily::Classical {
            continue;
        }
        let k = pair(family);
        for side in [Side::M, Side::K] {
            let p = k.exponent(side).unwrap();
            for u in [0.2, 1.0, 3.0] {
                let h = 1e-5;
                let g = |v: f64| k.regular(side, v).unwrap();
                let dg = (g(u + h) - g(u - h)) / (2.0 * h);
                let want = p * g(u) + u * dg;
                let got = k.scaled_slope(side, u).unwrap();
                assert!((got - want).abs() < 1e-6 * want.abs().max(1.0), "{family} {side:?} {u}: {got} vs {want}");
            }
        }
    }
}
