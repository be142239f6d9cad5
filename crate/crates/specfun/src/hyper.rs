use crate::gamma::{lgamma, rgamma};
use crate::{domain, Neumaier, Result, SpecFunError, SpecFunResult};

/// Maximum number of series terms before a series gives up.
pub const SERIES_TERM_CAP: usize = 2000;
/// Absolute error budget for the Mittag-Leffler series, scaled by max(1, |E|).
pub const ML_ABS_BUDGET: f64 = 1e-8;
const KUMMER_BUDGET: f64 = 1e-12;

/// Two-parameter Mittag-Leffler function E_{alpha,beta}(z) by its power series.
pub fn mittag_leffler(alpha: f64, beta: f64, z: f64) -> Result<SpecFunResult> {
    if !(alpha > 0.0) || !beta.is_finite() || !z.is_finite() {
        return domain(
            "mittag_leffler",
            format!("alpha = {alpha}, beta = {beta}, z = {z}"),
        );
    }
    if z == 0.0 {
        return Ok(SpecFunResult {
            value: rgamma(beta),
            est_abs_error: 0.0,
        });
    }
    let lnz = z.abs().ln();
    let mut acc = Neumaier::default();
    let mut abs_sum = 0.0;
    let mut prev = f64::INFINITY;
    for k in 0..SERIES_TERM_CAP {
        let kf = k as f64;
        let arg = alpha * kf + beta;
        let sign = if z < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
        // direct products stay within a few ulp; the log form is only for huge terms
        let term = if arg < 170.0 && kf * lnz < 700.0 {
            sign * z.abs().powi(k as i32) * rgamma(arg)
        } else {
            sign * (kf * lnz - lgamma(arg)?).exp()
        };
        acc.add(term);
        abs_sum += term.abs();
        let mag = term.abs();
        if k > 2 && mag <= prev && mag <= 1e-17 * abs_sum {
            let r = if prev > 0.0 { mag / prev } else { 0.0 };
            let tail = if r < 1.0 { mag * r / (1.0 - r) } else { mag };
            let value = acc.value();
            let est = 10.0 * f64::EPSILON * abs_sum + tail;
            if est > ML_ABS_BUDGET * value.abs().max(1.0) {
                return Err(SpecFunError::Accuracy {
                    func: "mittag_leffler",
                    value,
                    est_abs_error: est,
                });
            }
            return Ok(SpecFunResult {
                value,
                est_abs_error: est,
            });
        }
        if arg > 1.0 {
            prev = mag;
        }
    }
    Err(SpecFunError::Accuracy {
        func: "mittag_leffler",
        value: acc.value(),
        est_abs_error: f64::INFINITY,
    })
}

/// Confluent hypergeometric function Phi(b, a; z) = 1F1(b; a; z).
pub fn kummer(b: f64, a: f64, z: f64) -> Result<SpecFunResult> {
    if !b.is_finite() || !a.is_finite() || !z.is_finite() {
        return domain("kummer", format!("b = {b}, a = {a}, z = {z}"));
    }
    if a <= 0.0 && a == a.floor() {
        return domain("kummer", format!("a = {a} is a pole of the Pochhammer ratio"));
    }
    if z < 0.0 {
        // Kummer transformation keeps the series free of cancellation for the catalog
        let inner = kummer_series(a - b, a, -z)?;
        let scale = z.exp();
        return Ok(SpecFunResult {
            value: scale * inner.value,
            est_abs_error: scale * inner.est_abs_error,
        });
    }
    kummer_series(b, a, z)
}

fn kummer_series(b: f64, a: f64, z: f64) -> Result<SpecFunResult> {
    let mut acc = Neumaier::default();
    let mut term = 1.0;
    acc.add(term);
    let mut abs_sum = 1.0;
    for k in 1..SERIES_TERM_CAP {
        let kf = k as f64;
        term *= (b + kf - 1.0) / (a + kf - 1.0) * z / kf;
        acc.add(term);
        abs_sum += term.abs();
        let ratio = ((b + kf) / (a + kf) * z / (kf + 1.0)).abs();
        if term == 0.0 || (ratio < 0.5 && term.abs() <= 1e-17 * abs_sum) {
            let tail = term.abs() * ratio / (1.0 - ratio);
            let value = acc.value();
            let est = 8.0 * f64::EPSILON * abs_sum + tail;
            if est > KUMMER_BUDGET * value.abs().max(1.0) {
                return Err(SpecFunError::Accuracy {
                    func: "kummer",
                    value,
                    est_abs_error: est,
                });
            }
            return Ok(SpecFunResult {
                value,
                est_abs_error: est,
            });
        }
    }
    Err(SpecFunError::Accuracy {
        func: "kummer",
        value: acc.value(),
        est_abs_error: f64::INFINITY,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ml_reduces_to_exponential_and_cosh() {
        let e = mittag_leffler(1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(e.value, std::f64::consts::E, max_relative = 1e-14);
        let c = mittag_leffler(2.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(c.value, 1.0f64.cosh(), max_relative = 1e-14);
    }

    #[test]
    fn ml_refuses_when_series_cannot_converge() {
        // terms z^k / Gamma(0.01 k + 1) only start shrinking far beyond the cap
        assert!(matches!(
            mittag_leffler(0.01, 1.0, 50.0),
            Err(SpecFunError::Accuracy { .. })
        ));
    }

    #[test]
    fn kummer_pole_is_domain_error() {
        assert!(matches!(kummer(1.0, -2.0, 0.5), Err(SpecFunError::Domain { .. })));
    }

    #[test]
    fn kummer_transformation_consistent() {
        // Phi(1, 2; z) = (e^z - 1)/z on both sides of 0
        for &z in &[-7.5, -0.3, 0.3, 4.0] {
            let v = kummer(1.0, 2.0, z).unwrap().value;
            assert_relative_eq!(v, (z.exp() - 1.0) / z, max_relative = 1e-13);
        }
    }
}
