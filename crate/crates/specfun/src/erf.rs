use crate::FRAC_1_SQRT_PI;

const SWITCH: f64 = 2.5;
const CF_TERMS: usize = 150;

/// Series 2z/sqrt(pi) e^{-z^2} sum (2z^2)^n / (1*3*...*(2n+1)); all terms positive.
fn erf_series(z: f64) -> f64 {
    let z2 = 2.0 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= z2 / (2.0 * n + 1.0);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    2.0 * z * FRAC_1_SQRT_PI * (-z * z).exp() * sum
}

/// e^{z^2} erfc(z) for z >= SWITCH by backward continued fraction.
fn erfcx_cf(z: f64) -> f64 {
    let mut f = z;
    for n in (1..=CF_TERMS).rev() {
        f = z + (n as f64 * 0.5) / f;
    }
    FRAC_1_SQRT_PI / f
}

pub fn erf(z: f64) -> f64 {
    if z < 0.0 {
        return -erf(-z);
    }
    if z < SWITCH {
        erf_series(z)
    } else {
        1.0 - erfc(z)
    }
}

/// Complementary error function; erfc(z) + erfc(-z) = 2 holds by construction.
pub fn erfc(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    if z < 0.0 {
        return 2.0 - erfc(-z);
    }
    if z < SWITCH {
        1.0 - erf_series(z)
    } else {
        (-z * z).exp() * erfcx_cf(z)
    }
}

/// Scaled complementary error function e^{z^2} erfc(z).
pub fn erfcx(z: f64) -> f64 {
    if z >= SWITCH {
        erfcx_cf(z)
    } else if z >= 0.0 {
        (z * z).exp() * (1.0 - erf_series(z))
    } else {
        (z * z).exp() * (2.0 - erfc(-z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn seam_is_continuous() {
        let below = (SWITCH * SWITCH).exp() * (1.0 - erf_series(SWITCH));
        assert_relative_eq!(below, erfcx_cf(SWITCH), max_relative = 1e-12);
    }

    #[test]
    fn large_argument_scaled_form() {
        // e^{z^2} erfc(z) ~ 1/(z sqrt(pi)) (1 - 1/(2z^2) + 3/(4z^4))
        let z: f64 = 50.0;
        let asym = FRAC_1_SQRT_PI / z * (1.0 - 0.5 / (z * z) + 0.75 / z.powi(4));
        assert_relative_eq!(erfcx(z), asym, max_relative = 1e-9);
    }
}
