//! Weakly singular quadrature on graded panel meshes.
//!
//! Integrands are written as `s_lo^qa * s_hi^qb * phi(t)` where `s_lo`, `s_hi`
//! are the distances to the interval ends. Panels touching an end absorb the
//! corresponding power into Gauss-Jacobi weights; the caller only evaluates
//! the regular part `phi` and receives both distances computed without
//! cancellation.

use crate::error::{domain, Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Quadrature scheme parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadSpec {
    pub nodes_per_panel: usize,
    pub max_panels: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub grading: f64,
}

impl Default for QuadSpec {
    fn default() -> Self {
        QuadSpec {
            nodes_per_panel: 16,
            max_panels: 400,
            abs_tol: 1e-11,
            rel_tol: 1e-11,
            grading: 2.0,
        }
    }
}

const TOL_FLOOR: f64 = 1e-15;

impl QuadSpec {
    pub fn validate(&self) -> Result<()> {
        if !(2..=64).contains(&self.nodes_per_panel) {
            return domain(format!(
                "nodes_per_panel = {} outside [2, 64]",
                self.nodes_per_panel
            ));
        }
        if self.max_panels == 0 {
            return domain("max_panels must be positive");
        }
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return domain("tolerances must be positive");
        }
        if !(self.grading >= 1.0) {
            return domain(format!("grading = {} must be >= 1", self.grading));
        }
        Ok(())
    }

    /// Spec for integrals nested inside another quadrature.
    pub fn tightened(&self) -> QuadSpec {
        QuadSpec {
            abs_tol: (self.abs_tol / 10.0).max(TOL_FLOOR),
            rel_tol: (self.rel_tol / 10.0).max(TOL_FLOOR),
            ..*self
        }
    }

    /// Multiply both tolerances by `factor`.
    pub fn scaled(&self, factor: f64) -> QuadSpec {
        QuadSpec {
            abs_tol: (self.abs_tol * factor).max(TOL_FLOOR),
            rel_tol: (self.rel_tol * factor).max(TOL_FLOOR),
            ..*self
        }
    }
}

/// A quadrature value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub est_error: f64,
    pub panels: usize,
}

/// Gauss-Jacobi rule on [-1, 1] for the weight (1-u)^a (1+u)^b.
#[derive(Debug)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

type RuleKey = (usize, u64, u64);

fn rule_cache() -> &'static Mutex<HashMap<RuleKey, Arc<Rule>>> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<Rule>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cached Gauss-Jacobi rule, built by the Golub-Welsch eigenvalue method.
pub fn jacobi_rule(n: usize, a: f64, b: f64) -> Result<Arc<Rule>> {
    if n == 0 || !(a > -1.0) || !(b > -1.0) {
        return domain(format!("Gauss-Jacobi rule n = {n}, a = {a}, b = {b}"));
    }
    let key = (n, a.to_bits(), b.to_bits());
    if let Some(r) = rule_cache().lock().expect("rule cache poisoned").get(&key) {
        return Ok(r.clone());
    }
    let rule = Arc::new(golub_welsch(n, a, b)?);
    rule_cache()
        .lock()
        .expect("rule cache poisoned")
        .insert(key, rule.clone());
    Ok(rule)
}

fn golub_welsch(n: usize, a: f64, b: f64) -> Result<Rule> {
    let ab = a + b;
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + ab;
        j[(k, k)] = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        if k + 1 < n {
            let m = kf + 1.0;
            let s = 2.0 * m + ab;
            let beta = if k == 0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * m * (m + a) * (m + b) * (m + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            let off = beta.sqrt();
            j[(k, k + 1)] = off;
            j[(k + 1, k)] = off;
        }
    }
    let mu0 = 2f64.powf(ab + 1.0)
        * (specfun::lgamma(a + 1.0)? + specfun::lgamma(b + 1.0)? - specfun::lgamma(ab + 2.0)?)
            .exp();
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    })
}

/// Position of a quadrature node inside [lo, hi].
#[derive(Debug, Clone, Copy)]
pub struct Node {
    pub t: f64,
    /// t - lo, computed without cancellation.
    pub s_lo: f64,
    /// hi - t, computed without cancellation.
    pub s_hi: f64,
}

/// Behaviour at one end: s^exponent times a function smooth in s^smoothness.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoint {
    pub exponent: f64,
    pub smoothness: f64,
}

impl Endpoint {
    pub const REGULAR: Endpoint = Endpoint {
        exponent: 0.0,
        smoothness: 1.0,
    };

    pub fn power(exponent: f64) -> Endpoint {
        Endpoint {
            exponent,
            smoothness: 1.0,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.exponent > -1.0) {
            return domain(format!("endpoint exponent {} must exceed -1", self.exponent));
        }
        if !(self.smoothness > 0.0 && self.smoothness <= 1.0) {
            return domain(format!("endpoint smoothness {} must lie in (0, 1]", self.smoothness));
        }
        Ok(())
    }
}

/// Smallest smoothness power used for endpoint substitutions.
const MIN_SMOOTHNESS: f64 = 0.1;

/// Regular part at a node: value and an absolute noise bound on it.
pub type RegularFn<'a> = dyn Fn(Node) -> Result<(f64, f64)> + 'a;

#[derive(Debug, Clone, Copy)]
struct Panel {
    // distance from lo to the panel start, width, distance from panel end to hi
    start: f64,
    width: f64,
    end_gap: f64,
    value: f64,
    err: f64,
    floor: f64,
}

struct Problem<'a, 'b> {
    lo: f64,
    hi: f64,
    a: Endpoint,
    b: Endpoint,
    phi: &'a RegularFn<'b>,
}

struct PanelSum {
    value: f64,
    mass: f64,
    noise: f64,
}

impl Problem<'_, '_> {
    fn node(&self, s_lo: f64, s_hi: f64) -> Node {
        let t = if s_lo <= s_hi { self.lo + s_lo } else { self.hi - s_hi };
        Node { t, s_lo, s_hi }
    }

    fn panel_sum(&self, start: f64, width: f64, end_gap: f64, n: usize) -> Result<PanelSum> {
        let touches_lo = start == 0.0;
        let touches_hi = end_gap == 0.0;
        let (qa, qb) = (self.a.exponent, self.b.exponent);
        let mut acc = PanelSum {
            value: 0.0,
            mass: 0.0,
            noise: 0.0,
        };
        let mut add = |w: f64, node: Node, weight: f64| -> Result<()> {
            let (v, noise) = (self.phi)(node)?;
            let v = v * weight;
            if !v.is_finite() {
                return domain(format!("integrand is not finite at t = {}", node.t));
            }
            acc.value += w * v;
            acc.mass += (w * v).abs();
            acc.noise += (w * weight).abs() * noise;
            Ok(())
        };
        let scale;
        match (touches_lo, touches_hi) {
            (true, true) => {
                let rule = jacobi_rule(n, qb, qa)?;
                let half = 0.5 * width;
                for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
                    add(w, self.node(half * (1.0 + u), half * (1.0 - u)), 1.0)?;
                }
                scale = half.powf(1.0 + qa + qb);
            }
            (true, false) | (false, true) => {
                // s = width * w^(1/sigma) with w in [0, 1] measured from the touched end
                let e = if touches_lo { self.a } else { self.b };
                let sigma = e.smoothness.max(MIN_SMOOTHNESS);
                let c = (e.exponent + 1.0) / sigma - 1.0;
                let rule = if touches_lo { jacobi_rule(n, 0.0, c)? } else { jacobi_rule(n, c, 0.0)? };
                for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let frac = if touches_lo { 0.5 * (1.0 + u) } else { 0.5 * (1.0 - u) };
                    let s = width * frac.powf(1.0 / sigma);
                    let rest = end_gap.max(start) + (width - s);
                    let node = if touches_lo { self.node(s, rest) } else { self.node(rest, s) };
                    let q_other = if touches_lo { qb } else { qa };
                    let weight = if q_other != 0.0 { rest.powf(q_other) } else { 1.0 };
                    add(w, node, weight)?;
                }
                scale = width.powf(e.exponent + 1.0) / sigma * 2f64.powf(-c - 1.0);
            }
            (false, false) => {
                let rule = jacobi_rule(n, 0.0, 0.0)?;
                let half = 0.5 * width;
                for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
                    let s_lo = start + half * (1.0 + u);
                    let s_hi = end_gap + half * (1.0 - u);
                    let mut weight = 1.0;
                    if qa != 0.0 {
                        weight *= s_lo.powf(qa);
                    }
                    if qb != 0.0 {
                        weight *= s_hi.powf(qb);
                    }
                    add(w, self.node(s_lo, s_hi), weight)?;
                }
                scale = half;
            }
        }
        Ok(PanelSum {
            value: scale * acc.value,
            mass: scale * acc.mass,
            noise: scale * acc.noise,
        })
    }

    fn panel(&self, start: f64, width: f64, end_gap: f64, n: usize) -> Result<Panel> {
        let coarse = self.panel_sum(start, width, end_gap, n)?;
        let fine = self.panel_sum(start, width, end_gap, 2 * n)?;
        Ok(Panel {
            start,
            width,
            end_gap,
            value: fine.value,
            err: (fine.value - coarse.value).abs(),
            floor: 100.0 * f64::EPSILON * fine.mass + fine.noise,
        })
    }
}

/// Integrate `s_lo^a.exponent * s_hi^b.exponent * phi` over [lo, hi] adaptively.
///
/// The error floor includes the noise bounds reported by `phi`, so nested
/// quadratures stop refining once the inner error dominates.
pub fn integrate_weighted(
    phi: &RegularFn<'_>,
    lo: f64,
    hi: f64,
    a: Endpoint,
    b: Endpoint,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    spec.validate()?;
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return domain(format!("integration interval [{lo}, {hi}]"));
    }
    a.validate()?;
    b.validate()?;
    if lo == hi {
        return Ok(QuadResult {
            value: 0.0,
            est_error: 0.0,
            panels: 0,
        });
    }
    let prob = Problem { lo, hi, a, b, phi };
    let n = spec.nodes_per_panel;
    let g = spec.grading;
    let mut panels = vec![prob.panel(0.0, hi - lo, 0.0, n)?];
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        let floor: f64 = panels.iter().map(|p| p.floor).sum();
        let tol = spec.abs_tol.max(spec.rel_tol * value.abs()).max(floor);
        if err <= tol {
            return Ok(QuadResult {
                value,
                est_error: err.max(floor),
                panels: panels.len(),
            });
        }
        let (idx, worst) = panels
            .iter()
            .enumerate()
            .map(|(i, p)| (i, p.err - p.floor))
            .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        let fail = |why: &str| Error::Accuracy {
            context: format!("quadrature on [{lo}, {hi}]{why}"),
            estimate: value,
            error_bound: err,
        };
        if panels.len() >= spec.max_panels || worst <= 0.0 {
            return Err(fail(""));
        }
        let p = panels.remove(idx);
        let touches_lo = p.start == 0.0;
        let touches_hi = p.end_gap == 0.0;
        // width of the left piece
        let left = match (touches_lo, touches_hi) {
            (true, false) => p.width / g,
            (false, true) => p.width - p.width / g,
            _ => 0.5 * p.width,
        };
        let right = p.width - left;
        if left <= 0.0 || right <= 0.0 || p.start + left == p.start || p.end_gap + right == p.end_gap {
            return Err(fail(": panel width underflow"));
        }
        let a = prob.panel(p.start, left, p.end_gap + right, n)?;
        let b = prob.panel(p.start + left, right, p.end_gap, n)?;
        panels.insert(idx, b);
        panels.insert(idx, a);
    }
}

/// A kernel in the form u^p g(u) with g smooth in u^smoothness.
pub struct PowerKernel<'a> {
    pub exponent: f64,
    pub smoothness: f64,
    pub regular: &'a dyn Fn(f64) -> Result<f64>,
}

/// A convolution operand t^exponent phi(t) given by its full value and a noise bound.
pub struct Operand<'a> {
    pub exponent: f64,
    pub smoothness: f64,
    pub eval: &'a dyn Fn(f64) -> Result<(f64, f64)>,
}

/// (k * f)(x) = int_0^x k(x - t) f(t) dt for an operand with noisy values.
pub fn convolve_operand(kernel: &PowerKernel<'_>, f: &Operand<'_>, x: f64, spec: &QuadSpec) -> Result<QuadResult> {
    if !(x > 0.0) {
        return domain(format!("convolution at x = {x} requires x > 0"));
    }
    let q = f.exponent;
    let integrand = |node: Node| -> Result<(f64, f64)> {
        let g = (kernel.regular)(node.s_hi)?;
        let (v, noise) = (f.eval)(node.t)?;
        let scale = if q != 0.0 { node.t.powf(-q) } else { 1.0 };
        Ok((g * v * scale, (g * scale).abs() * noise))
    };
    integrate_weighted(
        &integrand,
        0.0,
        x,
        Endpoint {
            exponent: q,
            smoothness: f.smoothness,
        },
        Endpoint {
            exponent: kernel.exponent,
            smoothness: kernel.smoothness,
        },
        spec,
    )
}

/// (k * f)(x) = int_0^x k(x - t) f(t) dt where f(t) = t^q phi(t).
///
/// `f` returns the full value f(t); its regular part is recovered by dividing
/// out t^q.
pub fn convolve(
    kernel: &PowerKernel<'_>,
    f: &dyn Fn(f64) -> Result<f64>,
    q: f64,
    x: f64,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    let eval = |t: f64| -> Result<(f64, f64)> { Ok((f(t)?, 0.0)) };
    convolve_operand(
        kernel,
        &Operand {
            exponent: q,
            smoothness: 1.0,
            eval: &eval,
        },
        x,
        spec,
    )
}

/// Like [`convolve`] with f given by its regular part phi(t) = f(t) / t^q.
pub fn convolve_parts(
    kernel: &PowerKernel<'_>,
    phi: &dyn Fn(f64) -> Result<f64>,
    q: f64,
    smoothness: f64,
    x: f64,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    if !(x > 0.0) {
        return domain(format!("convolution at x = {x} requires x > 0"));
    }
    let integrand = |node: Node| -> Result<(f64, f64)> { Ok(((kernel.regular)(node.s_hi)? * phi(node.t)?, 0.0)) };
    integrate_weighted(
        &integrand,
        0.0,
        x,
        Endpoint {
            exponent: q,
            smoothness,
        },
        Endpoint {
            exponent: kernel.exponent,
            smoothness: kernel.smoothness,
        },
        spec,
    )
}

/// Plain integral of a continuous function over [a, b].
pub fn integrate_regular(
    f: &dyn Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    if !(a <= b) {
        return domain(format!("integrate_regular requires a <= b, got [{a}, {b}]"));
    }
    integrate_weighted(&|n: Node| Ok((f(n.t)?, 0.0)), a, b, Endpoint::REGULAR, Endpoint::REGULAR, spec)
}

/// Integral over [a, b] of f, where f behaves like (t-a)^qa near a and (b-t)^qb near b.
pub fn integrate_singular(
    f: &dyn Fn(f64) -> Result<f64>,
    a: f64,
    b: f64,
    qa: f64,
    qb: f64,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    let phi = |n: Node| -> Result<(f64, f64)> {
        let mut v = f(n.t)?;
        if qa != 0.0 {
            v /= n.s_lo.powf(qa);
        }
        if qb != 0.0 {
            v /= n.s_hi.powf(qb);
        }
        Ok((v, 0.0))
    };
    integrate_weighted(&phi, a, b, Endpoint::power(qa), Endpoint::power(qb), spec)
}
