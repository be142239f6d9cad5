//! Reference values frozen from a 30-digit independent evaluation.

use approx::assert_relative_eq;
use specfun::*;

#[test]
fn gamma_examples() {
    assert_relative_eq!(gamma(0.5).unwrap(), 1.772_453_850_905_516, max_relative = 1e-12);
    assert_eq!(gamma(1.0).unwrap(), 1.0);
    assert_relative_eq!(gamma(4.0).unwrap(), 6.0, max_relative = 1e-12);
    assert_relative_eq!(gamma(50.0).unwrap(), 6.082_818_640_342_675e62, max_relative = 1e-12);
}

#[test]
fn gamma_matches_statrs() {
    let mut x = 0.05;
    while x <= 50.0 {
        let ours = gamma(x).unwrap();
        let theirs = statrs::function::gamma::gamma(x);
        assert_relative_eq!(ours, theirs, max_relative = 1e-12);
        x += 0.37;
    }
}

#[test]
fn lower_incomplete_gamma_examples() {
    assert_relative_eq!(
        lower_incomplete_gamma(1.0, 1.0).unwrap(),
        0.632_120_558_828_557_7,
        max_relative = 1e-13
    );
    assert_eq!(lower_incomplete_gamma(0.5, 0.0).unwrap(), 0.0);
    assert!((lower_incomplete_gamma(0.5, 100.0).unwrap() - 1.772_453_850_905_516).abs() < 1e-10);
    let cases = [
        (0.5, 0.3, 0.995_094_539_655_707_975_5),
        (0.5, 3.0, 1.747_097_341_582_052_584),
        (0.25, 10.0, 3.625_602_355_966_219_585),
        (0.75, 1e-3, 0.007_494_671_979_059_126_395),
        (2.5, 7.0, 1.308_590_160_921_158_529),
    ];
    for (b, t, want) in cases {
        assert_relative_eq!(lower_incomplete_gamma(b, t).unwrap(), want, max_relative = 1e-12);
    }
}

#[test]
fn lower_incomplete_gamma_domain() {
    assert!(lower_incomplete_gamma(0.0, 1.0).is_err());
    assert!(lower_incomplete_gamma(0.5, -1.0).is_err());
}

#[test]
fn erfc_examples() {
    assert_eq!(erfc(0.0), 1.0);
    assert!(erfc(10.0) < 1e-40);
    assert!(erfc(10.0) > 0.0);
    assert_relative_eq!(erfc(1.0), 0.157_299_207_050_285_13, max_relative = 1e-13);
    assert_relative_eq!(erfc(-1.366_999_999_999_999), 1.946_792_121_944_477_8, max_relative = 1e-14);
}

#[test]
fn erfc_grid() {
    let cases = [
        (-5.0, 1.999_999_999_998_462_540_2),
        (-3.3, 1.999_996_942_290_203_561_8),
        (-2.4, 1.999_311_486_103_354_921_1),
        (-1.7, 1.983_790_458_590_774_560_8),
        (-0.675, 1.660_217_025_644_181_141_9),
        (-0.2, 1.222_702_589_210_478_466_2),
        (0.1, 0.887_537_083_981_715_101_6),
        (0.45, 0.524_518_280_213_076_314_45),
        (0.9, 0.203_091_787_577_167_860_34),
        (1.6, 0.023_651_616_655_355_984_478),
        (2.49, 0.000_429_287_867_733_912_905_59),
        (2.51, 0.000_385_705_481_724_279_779_72),
        (3.7, 1.671_510_579_091_459_751_3e-7),
        (5.2, 1.924_906_109_997_232_349_8e-13),
        (8.0, 1.122_429_717_298_292_708e-29),
    ];
    for (z, want) in cases {
        assert_relative_eq!(erfc(z), want, max_relative = 1e-12);
    }
}

#[test]
fn bessel_j_examples() {
    assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
    assert_eq!(bessel_j(1.0, 0.0).unwrap(), 0.0);
    let x = std::f64::consts::FRAC_PI_2;
    assert!((bessel_j(0.5, x).unwrap() - 0.636_619_772_367_581_4).abs() < 1e-14);
    let cases = [
        (0.0, 1.0, 0.765_197_686_557_966_551_4),
        (0.3, 2.5, 0.175_641_082_743_773_661_4),
        (-0.5, 3.0, -0.456_048_820_794_633_178_8),
        (0.5, 20.0, 0.162_880_763_855_029_870_9),
        (-0.3, 30.0, -0.023_488_393_769_170_388_07),
        (1.0, 50.0, -0.097_511_828_125_175_137_66),
        (0.75, 15.0, 0.182_745_127_373_489_062_3),
        (0.25, 0.01, 0.293_367_994_143_978_162_0),
    ];
    for (nu, x, want) in cases {
        assert!((bessel_j(nu, x).unwrap() - want).abs() < 1e-10, "J_{nu}({x})");
    }
}

#[test]
fn bessel_i_examples() {
    assert_eq!(bessel_i(0.0, 0.0).unwrap(), 1.0);
    assert_relative_eq!(bessel_i(0.5, 1.0).unwrap(), 0.937_674_888_245_443_7, max_relative = 1e-13);
    assert_relative_eq!(bessel_i(-0.5, 1.0).unwrap(), 1.231_200_214_592_967_4, max_relative = 1e-13);
    let cases = [
        (0.3, 2.5, 3.193_909_357_801_790_498),
        (-0.25, 7.0, 167.778_444_423_262_819_3),
        (0.75, 20.0, 42_934_125.453_056_302_63),
        (-0.5, 40.0, 14_847_705_549_021_964.43),
    ];
    for (nu, x, want) in cases {
        assert_relative_eq!(bessel_i(nu, x).unwrap(), want, max_relative = 1e-12);
    }
}

#[test]
fn bessel_order_out_of_range() {
    assert!(bessel_j(-1.5, 1.0).is_err());
    assert!(bessel_i(-2.0, 1.0).is_err());
    assert!(bessel_j(0.5, -1.0).is_err());
}

#[test]
fn mittag_leffler_examples() {
    assert_relative_eq!(
        mittag_leffler(1.0, 1.0, 1.0).unwrap().value,
        2.718_281_828_459_045,
        max_relative = 1e-14
    );
    assert_relative_eq!(
        mittag_leffler(2.0, 1.0, 1.0).unwrap().value,
        1.543_080_634_815_243_7,
        max_relative = 1e-14
    );
    assert_relative_eq!(
        mittag_leffler(0.5, 0.5, 0.0).unwrap().value,
        0.564_189_583_547_756_3,
        max_relative = 1e-14
    );
    let z = -(10f64.powf(0.3));
    let cases = [
        (0.5, 0.5, -3.0, 0.027_186_130_003_586_435_69),
        (0.3, 0.7, z, 0.190_281_751_903_884_395_7),
        (0.5, 0.5, 3.162_277_660_168_379_5, 139_307.626_206_236_190_1),
        (0.7, 1.2, -2.5, 0.235_720_731_461_910_915_6),
        (0.3, -0.3, z, -0.103_034_630_224_027_203_0),
    ];
    for (a, b, z, want) in cases {
        let r = mittag_leffler(a, b, z).unwrap();
        let err = (r.value - want).abs();
        assert!(err <= 1e-9 * want.abs().max(1.0), "E_({a},{b})({z}): {}", r.value);
        assert!(err <= r.est_abs_error.max(1e-15 * want.abs()), "error claim violated");
    }
}

#[test]
fn kummer_examples() {
    assert_eq!(kummer(0.7, 1.3, 0.0).unwrap().value, 1.0);
    assert_relative_eq!(kummer(1.0, 2.0, 1.0).unwrap().value, 1.718_281_828_459_045, max_relative = 1e-14);
    assert_relative_eq!(kummer(0.3, 0.3, 1.0).unwrap().value, 2.718_281_828_459_045, max_relative = 1e-14);
    let cases = [
        (0.25, 0.5, -10.0, 0.280_823_643_955_482_919_5),
        (-0.25, 0.5, -3.0, 1.858_479_403_971_023_033),
        (1.25, 1.5, -2.0, 0.217_617_342_318_426_201_1),
        (0.75, 1.5, -10.0, 0.131_363_321_611_816_364_1),
        (2.5, 0.7, 4.0, 1_104.854_295_527_444_355),
    ];
    for (b, a, z, want) in cases {
        assert_relative_eq!(kummer(b, a, z).unwrap().value, want, max_relative = 1e-12);
    }
}
