//! Sonin kernel pairs in the form M(t) = t^p_M g_M(t), K(t) = t^p_K g_K(t).

use crate::error::{domain, Error, Result};
use crate::quad::{convolve_parts, PowerKernel, QuadSpec};
use serde::{Deserialize, Serialize};
use specfun::{bessel_i, bessel_j, erfcx, kummer, lower_incomplete_gamma, mittag_leffler, rgamma};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// Sample points of the catalog admission check.
pub const SONIN_SAMPLES: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 10.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum KernelFamily {
    PowerRL,
    DampedPower,
    BesselPair,
    KummerPair,
    ErfcPair,
    MittagLefflerPair,
    HanygaPair,
    Classical,
}

impl KernelFamily {
    pub const ALL: [KernelFamily; 8] = [
        KernelFamily::PowerRL,
        KernelFamily::DampedPower,
        KernelFamily::BesselPair,
        KernelFamily::KummerPair,
        KernelFamily::ErfcPair,
        KernelFamily::MittagLefflerPair,
        KernelFamily::HanygaPair,
        KernelFamily::Classical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KernelFamily::PowerRL => "PowerRL",
            KernelFamily::DampedPower => "DampedPower",
            KernelFamily::BesselPair => "BesselPair",
            KernelFamily::KummerPair => "KummerPair",
            KernelFamily::ErfcPair => "ErfcPair",
            KernelFamily::MittagLefflerPair => "MittagLefflerPair",
            KernelFamily::HanygaPair => "HanygaPair",
            KernelFamily::Classical => "Classical",
        }
    }

    pub fn from_name(name: &str) -> Option<KernelFamily> {
        KernelFamily::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Parameters with their defaults; `None` marks a required parameter.
    pub fn params(self) -> &'static [(&'static str, Option<f64>)] {
        match self {
            KernelFamily::PowerRL | KernelFamily::BesselPair => &[("alpha", None)],
            KernelFamily::DampedPower => &[("alpha", None), ("lambda", Some(1.0))],
            KernelFamily::KummerPair => &[("alpha", None), ("beta", Some(0.25)), ("lambda", Some(1.0))],
            KernelFamily::ErfcPair => &[("lambda", Some(1.0))],
            KernelFamily::MittagLefflerPair => &[("alpha", None), ("lambda", Some(1.0))],
            KernelFamily::HanygaPair => &[("alpha", None), ("beta", None)],
            KernelFamily::Classical => &[],
        }
    }

    /// Parameters used when listing the catalog.
    pub fn catalog_params(self) -> BTreeMap<String, f64> {
        let mut m = BTreeMap::new();
        for &(name, default) in self.params() {
            let v = default.unwrap_or(match (self, name) {
                (KernelFamily::HanygaPair, "alpha") => 0.3,
                (KernelFamily::HanygaPair, _) => 0.7,
                _ => 0.5,
            });
            m.insert(name.to_owned(), v);
        }
        m
    }

    /// Sonin tolerance used for catalog admission.
    pub fn sonin_tolerance(self) -> f64 {
        match self {
            KernelFamily::PowerRL | KernelFamily::Classical => 1e-10,
            _ => 1e-7,
        }
    }
}

impl fmt::Display for KernelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    M,
    K,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::M => Side::K,
            Side::K => Side::M,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind {
    PowerRL { alpha: f64 },
    DampedPower { alpha: f64, lambda: f64 },
    Bessel { alpha: f64 },
    Kummer { alpha: f64, beta: f64, lambda: f64 },
    Erfc { lambda: f64 },
    MittagLeffler { alpha: f64, lambda: f64 },
    Hanyga { alpha: f64, beta: f64 },
    Classical,
}

/// An immutable kernel pair (M, K).
#[derive(Debug, Clone, PartialEq)]
pub struct KernelPair {
    family: KernelFamily,
    params: BTreeMap<String, f64>,
    kind: Kind,
    swapped: bool,
}

fn in_open_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        domain(format!("{name} = {v} must lie in (0, 1)"))
    }
}

fn non_negative(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        domain(format!("{name} = {v} must be finite and >= 0"))
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        domain(format!("{name} = {v} must be finite and > 0"))
    }
}

fn ml(alpha: f64, beta: f64, z: f64) -> Result<f64> {
    Ok(mittag_leffler(alpha, beta, z)?.value)
}

impl KernelPair {
    /// Build a pair from a family and named parameters; missing optional
    /// parameters take their defaults.
    pub fn new(family: KernelFamily, params: &BTreeMap<String, f64>) -> Result<KernelPair> {
        let spec = family.params();
        for name in params.keys() {
            if !spec.iter().any(|(n, _)| n == name) {
                return domain(format!("{family} has no parameter `{name}`"));
            }
        }
        let mut full = BTreeMap::new();
        for &(name, default) in spec {
            let v = match (params.get(name), default) {
                (Some(&v), _) => v,
                (None, Some(d)) => d,
                (None, None) => return domain(format!("{family} requires parameter `{name}`")),
            };
            full.insert(name.to_owned(), v);
        }
        let get = |n: &str| full[n];
        let kind = match family {
            KernelFamily::PowerRL => {
                in_open_unit("alpha", get("alpha"))?;
                Kind::PowerRL { alpha: get("alpha") }
            }
            KernelFamily::DampedPower => {
                in_open_unit("alpha", get("alpha"))?;
                non_negative("lambda", get("lambda"))?;
                Kind::DampedPower {
                    alpha: get("alpha"),
                    lambda: get("lambda"),
                }
            }
            KernelFamily::BesselPair => {
                in_open_unit("alpha", get("alpha"))?;
                Kind::Bessel { alpha: get("alpha") }
            }
            KernelFamily::KummerPair => {
                in_open_unit("alpha", get("alpha"))?;
                non_negative("lambda", get("lambda"))?;
                if !get("beta").is_finite() {
                    return domain("beta must be finite");
                }
                Kind::Kummer {
                    alpha: get("alpha"),
                    beta: get("beta"),
                    lambda: get("lambda"),
                }
            }
            KernelFamily::ErfcPair => {
                positive("lambda", get("lambda"))?;
                Kind::Erfc { lambda: get("lambda") }
            }
            KernelFamily::MittagLefflerPair => {
                in_open_unit("alpha", get("alpha"))?;
                positive("lambda", get("lambda"))?;
                Kind::MittagLeffler {
                    alpha: get("alpha"),
                    lambda: get("lambda"),
                }
            }
            KernelFamily::HanygaPair => {
                let (a, b) = (get("alpha"), get("beta"));
                in_open_unit("alpha", a)?;
                in_open_unit("beta", b)?;
                if !(a < b) {
                    return domain(format!("HanygaPair requires alpha < beta, got {a} >= {b}"));
                }
                Kind::Hanyga { alpha: a, beta: b }
            }
            KernelFamily::Classical => Kind::Classical,
        };
        Ok(KernelPair {
            family,
            params: full,
            kind,
            swapped: false,
        })
    }

    /// Build a pair from a list of (name, value) parameters.
    pub fn with(family: KernelFamily, params: &[(&str, f64)]) -> Result<KernelPair> {
        let map = params.iter().map(|&(k, v)| (k.to_owned(), v)).collect();
        KernelPair::new(family, &map)
    }

    pub fn power_rl(alpha: f64) -> Result<KernelPair> {
        KernelPair::with(KernelFamily::PowerRL, &[("alpha", alpha)])
    }

    pub fn classical() -> KernelPair {
        KernelPair {
            family: KernelFamily::Classical,
            params: BTreeMap::new(),
            kind: Kind::Classical,
            swapped: false,
        }
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    pub fn is_classical(&self) -> bool {
        self.kind == Kind::Classical
    }

    pub fn is_swapped(&self) -> bool {
        self.swapped
    }

    /// The pair (K, M).
    pub fn swapped(&self) -> KernelPair {
        KernelPair {
            swapped: !self.swapped,
            ..self.clone()
        }
    }

    /// Order parameter alpha, if the family has one.
    pub fn alpha(&self) -> Option<f64> {
        self.params.get("alpha").copied()
    }

    /// Human-readable identifier such as `PowerRL(alpha=0.5)`.
    pub fn label(&self) -> String {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let s = format!("{}({})", self.family, params.join(", "));
        if self.swapped {
            format!("swapped {s}")
        } else {
            s
        }
    }

    fn side(&self, side: Side) -> Side {
        if self.swapped {
            side.other()
        } else {
            side
        }
    }

    fn classical_k<T>(&self) -> Result<T> {
        domain("the Classical K kernel is a delta distribution, not a function")
    }

    /// Exponent p with kernel(t) = t^p g(t).
    pub fn exponent(&self, side: Side) -> Result<f64> {
        let side = self.side(side);
        Ok(match (self.kind, side) {
            (Kind::Classical, Side::M) => 0.0,
            (Kind::Classical, Side::K) => return self.classical_k(),
            (Kind::Erfc { .. }, _) => -0.5,
            (Kind::Hanyga { beta, .. }, Side::M) => -beta,
            (Kind::Hanyga { beta, .. }, Side::K) => beta - 1.0,
            (
                Kind::PowerRL { alpha }
                | Kind::DampedPower { alpha, .. }
                | Kind::Bessel { alpha }
                | Kind::Kummer { alpha, .. }
                | Kind::MittagLeffler { alpha, .. },
                s,
            ) => match s {
                Side::M => alpha - 1.0,
                Side::K => -alpha,
            },
        })
    }

    /// Power sigma such that the regular part is a smooth function of u^sigma.
    pub fn smoothness(&self, side: Side) -> f64 {
        match (self.kind, self.side(side)) {
            (Kind::Hanyga { alpha, .. }, _) => alpha,
            (Kind::Erfc { .. }, _) => 0.5,
            (Kind::MittagLeffler { alpha, .. }, _) => 1.0 - alpha,
            _ => 1.0,
        }
    }

    /// Regular part g(u) = u^-p kernel(u), continuous on [0, inf).
    pub fn regular(&self, side: Side, u: f64) -> Result<f64> {
        let side = self.side(side);
        if !(u >= 0.0) {
            return domain(format!("kernel regular part at u = {u}"));
        }
        Ok(match (self.kind, side) {
            (Kind::Classical, Side::M) => 1.0,
            (Kind::Classical, Side::K) => return self.classical_k(),
            (Kind::PowerRL { alpha }, Side::M) => rgamma(alpha),
            (Kind::PowerRL { alpha }, Side::K) => rgamma(1.0 - alpha),
            (Kind::DampedPower { alpha, lambda }, Side::M) => (-lambda * u).exp() * rgamma(alpha),
            (Kind::DampedPower { alpha, lambda }, Side::K) => {
                let tail = if lambda == 0.0 || u == 0.0 {
                    0.0
                } else {
                    (lambda * u).powf(alpha) * lower_incomplete_gamma(1.0 - alpha, lambda * u)?
                };
                ((-lambda * u).exp() + tail) * rgamma(1.0 - alpha)
            }
            (Kind::Bessel { alpha }, Side::M) => bessel_regular(-1.0, alpha, u)?,
            (Kind::Bessel { alpha }, Side::K) => bessel_regular(1.0, 1.0 - alpha, u)?,
            (Kind::Kummer { alpha, beta, lambda }, Side::M) => kummer(beta, alpha, -lambda * u)?.value,
            (Kind::Kummer { alpha, beta, lambda }, Side::K) => {
                (PI * alpha).sin() / PI * kummer(-beta, 1.0 - alpha, -lambda * u)?.value
            }
            (Kind::Erfc { lambda }, Side::M) => u.sqrt() + lambda * FRAC_1_SQRT_PI,
            (Kind::Erfc { lambda }, Side::K) => {
                let r = u.sqrt();
                FRAC_1_SQRT_PI - lambda * r * erfcx(lambda * r)
            }
            (Kind::MittagLeffler { alpha, lambda }, Side::M) => u.powf(1.0 - alpha) - lambda * rgamma(alpha),
            (Kind::MittagLeffler { alpha, lambda }, Side::K) => {
                lambda * ml(1.0 - alpha, 1.0 - alpha, lambda * u.powf(1.0 - alpha))?
            }
            (Kind::Hanyga { alpha, beta }, Side::M) => {
                u.powf(alpha) * rgamma(1.0 - beta + alpha) + rgamma(1.0 - beta)
            }
            (Kind::Hanyga { alpha, beta }, Side::K) => ml(alpha, beta, -u.powf(alpha))?,
        })
    }

    /// Regular part of u kernel'(u): p g(u) + u g'(u).
    pub fn scaled_slope(&self, side: Side, u: f64) -> Result<f64> {
        let p = self.exponent(side)?;
        let g = self.regular(side, u)?;
        let side = self.side(side);
        let ug = match (self.kind, side) {
            (Kind::Classical, _) | (Kind::PowerRL { .. }, _) => 0.0,
            (Kind::DampedPower { lambda, .. }, Side::M) => -lambda * u * g,
            (Kind::DampedPower { alpha, lambda }, Side::K) => {
                if lambda == 0.0 || u == 0.0 {
                    0.0
                } else {
                    alpha * (lambda * u).powf(alpha) * lower_incomplete_gamma(1.0 - alpha, lambda * u)?
                        * rgamma(1.0 - alpha)
                }
            }
            (Kind::Bessel { alpha }, Side::M) => -u * bessel_regular(-1.0, alpha + 1.0, u)?,
            (Kind::Bessel { alpha }, Side::K) => u * bessel_regular(1.0, 2.0 - alpha, u)?,
            (Kind::Kummer { alpha, beta, lambda }, Side::M) => {
                -lambda * u * beta / alpha * kummer(beta + 1.0, alpha + 1.0, -lambda * u)?.value
            }
            (Kind::Kummer { alpha, beta, lambda }, Side::K) => {
                (PI * alpha).sin() / PI * lambda * u * beta / (1.0 - alpha)
                    * kummer(1.0 - beta, 2.0 - alpha, -lambda * u)?.value
            }
            (Kind::Erfc { .. }, Side::M) => 0.5 * u.sqrt(),
            (Kind::Erfc { lambda }, Side::K) => {
                let r = u.sqrt();
                let ex = erfcx(lambda * r);
                -lambda * (0.5 * r * ex + lambda * lambda * u * r * ex - lambda * u * FRAC_1_SQRT_PI)
            }
            (Kind::MittagLeffler { alpha, .. }, Side::M) => (1.0 - alpha) * u.powf(1.0 - alpha),
            (Kind::MittagLeffler { alpha, lambda }, Side::K) => {
                return Ok(lambda * ml(1.0 - alpha, -alpha, lambda * u.powf(1.0 - alpha))?);
            }
            (Kind::Hanyga { alpha, beta }, Side::M) => alpha * u.powf(alpha) * rgamma(1.0 - beta + alpha),
            (Kind::Hanyga { alpha, beta }, Side::K) => {
                return Ok(ml(alpha, beta - 1.0, -u.powf(alpha))?);
            }
        };
        Ok(p * g + ug)
    }

    /// Kernel value t^p g(t).
    pub fn eval(&self, side: Side, t: f64) -> Result<f64> {
        if !(t > 0.0) {
            return domain(format!("kernel evaluated at t = {t}; requires t > 0"));
        }
        let p = self.exponent(side)?;
        Ok(t.powf(p) * self.regular(side, t)?)
    }

    /// Sonin check (M * K)(x) - 1 at each sample point.
    pub fn sonin_residual(&self, xs: &[f64], spec: &QuadSpec) -> Result<SoninReport> {
        if xs.is_empty() || xs.iter().any(|&x| !(x > 0.0)) {
            return domain("Sonin sample points must be nonempty and positive");
        }
        let mut residuals = Vec::with_capacity(xs.len());
        if self.is_classical() {
            residuals.resize(xs.len(), 0.0);
        } else {
            let gm = |u: f64| self.regular(Side::M, u);
            let m = PowerKernel {
                exponent: self.exponent(Side::M)?,
                smoothness: self.smoothness(Side::M),
                regular: &gm,
            };
            let gk = |u: f64| self.regular(Side::K, u);
            let q = self.exponent(Side::K)?;
            for &x in xs {
                match convolve_parts(&m, &gk, q, self.smoothness(Side::K), x, spec) {
                    Ok(r) => residuals.push(r.value - 1.0),
                    Err(Error::Accuracy {
                        estimate, error_bound, ..
                    }) => {
                        return Err(Error::Accuracy {
                            context: format!("Sonin check of {} at x = {x}", self.label()),
                            estimate,
                            error_bound,
                        })
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        let max_abs_residual = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        Ok(SoninReport {
            family: self.family,
            params: self.params.clone(),
            swapped: self.swapped,
            xs: xs.to_vec(),
            residuals,
            max_abs_residual,
        })
    }

    /// Build a pair and admit it only if it passes the Sonin check at
    /// [`SONIN_SAMPLES`] within its family tolerance.
    pub fn verified(
        family: KernelFamily,
        params: &BTreeMap<String, f64>,
        spec: &QuadSpec,
    ) -> Result<KernelPair> {
        let pair = KernelPair::new(family, params)?;
        let report = pair.sonin_residual(&SONIN_SAMPLES, spec)?;
        if report.passes() {
            Ok(pair)
        } else {
            domain(format!(
                "{} fails the Sonin check: max |M*K - 1| = {:e}",
                pair.label(),
                report.max_abs_residual
            ))
        }
    }
}

/// sum_k (sign u)^k / (k! Gamma(k + a)) via Bessel functions of order a - 1.
fn bessel_regular(sign: f64, a: f64, u: f64) -> Result<f64> {
    if u == 0.0 {
        return Ok(rgamma(a));
    }
    let r = u.sqrt();
    let nu = a - 1.0;
    let b = if sign < 0.0 { bessel_j(nu, 2.0 * r)? } else { bessel_i(nu, 2.0 * r)? };
    Ok(r.powf(-nu) * b)
}

/// Sonin residual table for one pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SoninReport {
    pub family: KernelFamily,
    pub params: BTreeMap<String, f64>,
    pub swapped: bool,
    pub xs: Vec<f64>,
    pub residuals: Vec<f64>,
    pub max_abs_residual: f64,
}

impl SoninReport {
    pub fn passes(&self) -> bool {
        self.max_abs_residual <= self.family.sonin_tolerance()
    }
}

/// One catalog record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub family: KernelFamily,
    pub params: BTreeMap<String, f64>,
    pub m_exponent: Option<f64>,
    pub k_exponent: Option<f64>,
    pub enabled: bool,
    pub report: Option<SoninReport>,
    pub error: Option<String>,
}

/// Every family at its catalog parameters, with its Sonin table.
pub fn catalog(spec: &QuadSpec) -> Vec<CatalogEntry> {
    KernelFamily::ALL
        .iter()
        .map(|&family| {
            let params = family.catalog_params();
            let pair = KernelPair::new(family, &params).expect("catalog parameters are in range");
            let (report, error) = match pair.sonin_residual(&SONIN_SAMPLES, spec) {
                Ok(r) => (Some(r), None),
                Err(e) => (None, Some(e.to_string())),
            };
            CatalogEntry {
                family,
                m_exponent: pair.exponent(Side::M).ok(),
                k_exponent: pair.exponent(Side::K).ok(),
                enabled: report.as_ref().is_some_and(SoninReport::passes),
                params,
                report,
                error,
            }
        })
        .collect()
}
