//! Orthogonal curvilinear coordinates.
//!
//! Every operator weights field components with the Lamé coefficients and
//! applies the axis-wise GF derivative to the weighted product as a single
//! profile; products are never split by a Leibniz rule. Theorem checks reduce
//! to the Cartesian checks on the weighted components, which are built by
//! symbolic multiplication so that H = 1 reproduces the Cartesian results
//! exactly.

use crate::error::{domain, Result};
use crate::fields::{axis_gfd, product, ExprField, FieldRef, VecField};
use crate::geometry::{Box3D, Point, SimpleLine3D};
use crate::gfc1d::{gfi_profile, interval_est, Product, ProfileRef};
use crate::gfint::{gfi_restricted, restrict_to_line};
use crate::kernels::KernelPair;
use crate::quad::QuadSpec;
use crate::theorems::{check_gauss, check_stokes, GaussVolume, StokesSurface, TheoremReport};
use crate::vectorops::{line_gradient_profile, KernelTriple, VecResult};
use fieldlang::{parse_with, FieldExpr, Func, VarSet};
use std::f64::consts::{PI, TAU};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordKind {
    Cartesian,
    Cylindrical,
    Spherical,
    Custom,
}

/// An orthogonal coordinate system given by its Lamé coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordSystem {
    pub kind: CoordKind,
    pub vars: VarSet,
    /// H_k as expressions in the three coordinates.
    pub lame: [FieldExpr; 3],
    /// Coordinate ranges; upper bounds may be infinite.
    pub bounds: [(f64, f64); 3],
}

const HALF_LINE: (f64, f64) = (0.0, f64::INFINITY);
const VALIDATE_GRID: usize = 6;

impl CoordSystem {
    pub fn cartesian() -> CoordSystem {
        CoordSystem {
            kind: CoordKind::Cartesian,
            vars: VarSet::xyz(),
            lame: [FieldExpr::num(1.0), FieldExpr::num(1.0), FieldExpr::num(1.0)],
            bounds: [HALF_LINE; 3],
        }
    }

    /// (r, phi, z) with H = (1, r, 1).
    pub fn cylindrical() -> CoordSystem {
        CoordSystem {
            kind: CoordKind::Cylindrical,
            vars: VarSet::new(["r", "phi", "z"]),
            lame: [FieldExpr::num(1.0), FieldExpr::var(0), FieldExpr::num(1.0)],
            bounds: [HALF_LINE, (0.0, TAU), HALF_LINE],
        }
    }

    /// (r, theta, phi) with H = (1, r, r sin(theta)).
    pub fn spherical() -> CoordSystem {
        CoordSystem {
            kind: CoordKind::Spherical,
            vars: VarSet::new(["r", "theta", "phi"]),
            lame: [
                FieldExpr::num(1.0),
                FieldExpr::var(0),
                FieldExpr::mul(FieldExpr::var(0), FieldExpr::call(Func::Sin, FieldExpr::var(1))),
            ],
            bounds: [HALF_LINE, (0.0, PI), (0.0, TAU)],
        }
    }

    /// Lamé coefficients given as expressions in the named coordinates.
    pub fn custom(names: [&str; 3], lame: [&str; 3], bounds: [(f64, f64); 3]) -> Result<CoordSystem> {
        let vars = VarSet::new(names);
        let mut exprs = Vec::with_capacity(3);
        for text in lame {
            exprs.push(parse_with(text, &vars).map_err(|e| crate::Error::Domain(e.to_string()))?);
        }
        let lame: [FieldExpr; 3] = exprs.try_into().expect("three coefficients");
        let cs = CoordSystem {
            kind: CoordKind::Custom,
            vars,
            lame,
            bounds,
        };
        let v = cs.validate();
        if !v.is_empty() {
            return Err(crate::Error::Geometry(v));
        }
        Ok(cs)
    }

    pub fn from_name(name: &str) -> Option<CoordSystem> {
        match name {
            "cartesian" => Some(CoordSystem::cartesian()),
            "cylindrical" => Some(CoordSystem::cylindrical()),
            "spherical" => Some(CoordSystem::spherical()),
            _ => None,
        }
    }

    /// H positive on an interior grid; bounds ordered.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (k, &(lo, hi)) in self.bounds.iter().enumerate() {
            if !(lo >= 0.0 && hi > lo) {
                out.push(format!("coordinate {} has bounds [{lo}, {hi}]", self.vars.name(k)));
            }
        }
        if !out.is_empty() {
            return out;
        }
        let ticks = |k: usize| -> Vec<f64> {
            let (lo, hi) = self.bounds[k];
            let hi = if hi.is_finite() { hi } else { lo + 10.0 };
            (0..VALIDATE_GRID)
                .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / VALIDATE_GRID as f64)
                .collect()
        };
        let (a, b, c) = (ticks(0), ticks(1), ticks(2));
        for &q0 in &a {
            for &q1 in &b {
                for &q2 in &c {
                    let q = [q0, q1, q2];
                    for (k, h) in self.lame.iter().enumerate() {
                        match h.eval(&q) {
                            Ok(v) if v > 0.0 && v.is_finite() => {}
                            other => {
                                out.push(format!("H_{} = {other:?} at {q:?}", k + 1));
                                return out;
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn parse_scalar(&self, text: &str) -> Result<FieldRef> {
        let e = parse_with(text, &self.vars).map_err(|e| crate::Error::Domain(e.to_string()))?;
        Ok(ExprField::new(e))
    }

    pub fn parse_vec(&self, texts: [&str; 3]) -> Result<VecField> {
        let [a, b, c] = texts;
        Ok([self.parse_scalar(a)?, self.parse_scalar(b)?, self.parse_scalar(c)?])
    }

    fn in_bounds(&self, q: Point) -> Result<()> {
        for k in 0..3 {
            let (lo, hi) = self.bounds[k];
            if !(q[k] >= lo && q[k] <= hi) {
                return domain(format!(
                    "{} = {} outside [{lo}, {hi}]",
                    self.vars.name(k),
                    q[k]
                ));
            }
        }
        Ok(())
    }

    /// Lamé coefficients at q; refuses coordinate singularities.
    pub fn lame_at(&self, q: Point) -> Result<[f64; 3]> {
        self.in_bounds(q)?;
        let mut h = [0.0; 3];
        for k in 0..3 {
            h[k] = self.lame[k].eval(&q)?;
            if h[k] <= 0.0 {
                return domain(format!("H_{} = {} at {q:?}: coordinate singularity", k + 1, h[k]));
            }
        }
        Ok(h)
    }

    fn weight(&self, ks: &[usize]) -> FieldRef {
        let e = ks
            .iter()
            .fold(FieldExpr::num(1.0), |acc, &k| FieldExpr::mul(acc, self.lame[k].clone()));
        ExprField::new(e)
    }

    /// H_k F_k per component.
    pub fn hatted(&self, f: &VecField) -> VecField {
        std::array::from_fn(|k| product(&self.weight(&[k]), &f[k]))
    }

    /// H_m H_n F_k per component, (k, m, n) cyclic.
    pub fn flux_weighted(&self, f: &VecField) -> VecField {
        std::array::from_fn(|k| product(&self.weight(&[(k + 1) % 3, (k + 2) % 3]), &f[k]))
    }
}

/// I^{q_k} of H_k f along axis k with the other coordinates frozen at q.
pub fn gfi_hat(cs: &CoordSystem, pair: &KernelPair, axis: usize, f: &FieldRef, q: Point, spec: &QuadSpec) -> Result<f64> {
    cs.in_bounds(q)?;
    let weighted = product(&cs.weight(&[axis]), f);
    gfi_profile(pair, weighted.along(axis, q)?, spec)?.value(q[axis])
}

/// Interval form of [`gfi_hat`] over [a, b] along axis k.
pub fn gfi_hat_interval(
    cs: &CoordSystem,
    pair: &KernelPair,
    axis: usize,
    f: &FieldRef,
    q: Point,
    (a, b): (f64, f64),
    spec: &QuadSpec,
) -> Result<f64> {
    cs.in_bounds(q)?;
    let weighted = product(&cs.weight(&[axis]), f);
    Ok(interval_est(&*gfi_profile(pair, weighted.along(axis, q)?, spec)?, a, b)?.0)
}

/// Component k: (1/H_k) D^{q_k} U.
pub fn grad_occ(cs: &CoordSystem, kt: &KernelTriple, u: &FieldRef, q: Point, spec: &QuadSpec) -> Result<VecResult> {
    let h = cs.lame_at(q)?;
    let mut components = [0.0; 3];
    for k in 0..3 {
        components[k] = axis_gfd(&kt[k], u, k, spec)?.value(q)? / h[k];
    }
    Ok(VecResult { components, point: q })
}

/// (1/(H1 H2 H3)) sum_k D^{q_k}(H_m H_n F_k).
pub fn div_occ(cs: &CoordSystem, kt: &KernelTriple, f: &VecField, q: Point, spec: &QuadSpec) -> Result<f64> {
    let h = cs.lame_at(q)?;
    let w = cs.flux_weighted(f);
    let mut total = 0.0;
    for k in 0..3 {
        total += axis_gfd(&kt[k], &w[k], k, spec)?.value(q)?;
    }
    Ok(total / (h[0] * h[1] * h[2]))
}

/// Component k: (D^{q_m}(H_n F_n) - D^{q_n}(H_m F_m)) / (H_m H_n), (k, m, n) cyclic.
pub fn curl_occ(cs: &CoordSystem, kt: &KernelTriple, f: &VecField, q: Point, spec: &QuadSpec) -> Result<VecResult> {
    let h = cs.lame_at(q)?;
    let hat = cs.hatted(f);
    let mut components = [0.0; 3];
    for k in 0..3 {
        let (m, n) = ((k + 1) % 3, (k + 2) % 3);
        let a = axis_gfd(&kt[m], &hat[n], m, spec)?.value(q)?;
        let b = axis_gfd(&kt[n], &hat[m], n, spec)?.value(q)?;
        components[k] = (a - b) / (h[m] * h[n]);
    }
    Ok(VecResult { components, point: q })
}

/// Spherical GF curl with the component formulas exactly as displayed in the
/// literature, in (r, theta, phi):
/// r: (1/(r sin)) [D^theta(F_phi sin) - D^phi F_phi],
/// theta: (1/(r sin)) D^phi F_r - (1/r) D^r(r F_phi),
/// phi: (1/r) D^r(r F_theta) - (1/r) D^theta F_r.
/// The r component differs from [`curl_occ`], which uses F_theta in the
/// second term as the classical curl does.
pub fn curl_spherical_as_printed(kt: &KernelTriple, f: &VecField, q: Point, spec: &QuadSpec) -> Result<VecResult> {
    let cs = CoordSystem::spherical();
    cs.lame_at(q)?;
    let (r, st) = (q[0], q[1].sin());
    let sin = ExprField::new(FieldExpr::call(Func::Sin, FieldExpr::var(1)));
    let rr = ExprField::new(FieldExpr::var(0));
    let d = |axis: usize, g: &FieldRef| -> Result<f64> { axis_gfd(&kt[axis], g, axis, spec)?.value(q) };
    let comp_r = (d(1, &product(&f[2], &sin))? - d(2, &f[2])?) / (r * st);
    let comp_theta = d(2, &f[0])? / (r * st) - d(0, &product(&rr, &f[2]))? / r;
    let comp_phi = d(0, &product(&rr, &f[1]))? / r - d(1, &f[0])? / r;
    Ok(VecResult {
        components: [comp_r, comp_theta, comp_phi],
        point: q,
    })
}

/// Gradient theorem on a simple line in coordinates: the hatted line GFI of
/// the line GF gradient (1/H_k) K_k * (dU/dq_k on the line) against U(B) - U(A).
pub fn check_gradient_occ(
    cs: &CoordSystem,
    kt: &KernelTriple,
    u: &FieldRef,
    line: &SimpleLine3D,
    spec: &QuadSpec,
) -> Result<TheoremReport> {
    let v = line.validate();
    if !v.is_empty() {
        return Err(crate::Error::Geometry(v));
    }
    let inner = spec.tightened();
    let mut comps: [Option<ProfileRef>; 3] = [None, None, None];
    for k in 0..3 {
        let Some(g) = line_gradient_profile(&kt[k], u, line, k, &inner)? else {
            continue;
        };
        comps[k] = Some(if matches!(cs.lame[k], FieldExpr::Num(c) if c == 1.0) {
            g
        } else {
            let h: FieldRef = ExprField::new(cs.lame[k].clone());
            let inv: FieldRef = ExprField::new(FieldExpr::div(FieldExpr::num(1.0), cs.lame[k].clone()));
            let (Some(hp), Some(ip)) = (restrict_to_line(&h, line, k)?, restrict_to_line(&inv, line, k)?) else {
                continue;
            };
            Product::new(hp, Product::new(ip, g))
        });
    }
    let (a, b) = (line.start_point()?, line.end_point()?);
    let lhs = gfi_restricted(kt, &comps, a, b, spec)?;
    let rhs = u.value(b)? - u.value(a)?;
    let abs_residual = (lhs.value - rhs).abs();
    Ok(TheoremReport {
        theorem: "gradient_occ".into(),
        kernel: kt.label(),
        geometry: format!("{:?} line {a:?} -> {b:?}", cs.kind),
        field: u.expr().map(|e| e.display(&cs.vars).to_string()).unwrap_or_default(),
        lhs: lhs.value,
        rhs,
        abs_residual,
        rel_residual: abs_residual / 1f64.max(lhs.value.abs()).max(rhs.abs()),
        est_numerical_error: lhs.est_error,
        note: "rhs = U(B) - U(A) with A the start point".into(),
    })
}

/// Stokes' theorem in coordinates: the Cartesian check on H_k F_k.
pub fn check_stokes_occ(
    cs: &CoordSystem,
    kt: &KernelTriple,
    f: &VecField,
    surface: &StokesSurface,
    spec: &QuadSpec,
) -> Result<TheoremReport> {
    let mut r = check_stokes(kt, &cs.hatted(f), surface, spec)?;
    r.theorem = "stokes_occ".into();
    r.geometry = format!("{:?} {}", cs.kind, r.geometry);
    Ok(r)
}

/// Gauss' theorem on a coordinate box: the Cartesian check on H_m H_n F_k.
pub fn check_gauss_occ(cs: &CoordSystem, kt: &KernelTriple, f: &VecField, w: &Box3D, spec: &QuadSpec) -> Result<TheoremReport> {
    for (k, &(lo, hi)) in cs.bounds.iter().enumerate() {
        if w.lo[k] < lo || w.hi[k] > hi {
            return domain(format!("box exceeds the range of {}", cs.vars.name(k)));
        }
    }
    let mut r = check_gauss(kt, &cs.flux_weighted(f), &GaussVolume::Box(w.clone()), spec)?;
    r.theorem = "gauss_occ".into();
    r.geometry = format!("{:?} {}", cs.kind, r.geometry);
    Ok(r)
}
