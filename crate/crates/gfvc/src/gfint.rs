//! General fractional integrals over lines, surfaces and volumes.
//!
//! Line integrals sum, over the coordinate axes, interval GFIs of the field
//! component restricted to the line and expressed through that coordinate.
//! Double and triple integrals are iterated interval GFIs; inner integrals are
//! evaluated per outer node with a tightened spec.

use crate::error::{domain, Error, Result};
use crate::fields::{on_graph, Field, FieldRef, RayProfile, VecField};
use crate::geometry::{Box3D, Patch, PiecewiseSimpleLine, Point, SimpleLine3D, SimpleRegion2D, ZSimpleRegion3D};
use crate::gfc1d::{gfi_profile, interval_est, ExprProfile, FdProfile, Profile, ProfileRef};
use crate::kernels::KernelPair;
use crate::quad::QuadSpec;
use crate::vectorops::KernelTriple;
use fieldlang::FieldExpr;
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

/// A value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub est_error: f64,
}

impl Estimate {
    fn add(self, sign: f64, other: Estimate) -> Estimate {
        Estimate {
            value: self.value + sign * other.value,
            est_error: self.est_error + other.est_error,
        }
    }

    const ZERO: Estimate = Estimate {
        value: 0.0,
        est_error: 0.0,
    };
}

/// Total over pieces, with each piece's contribution in order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GfiResult {
    pub value: f64,
    pub contributions: Vec<f64>,
    pub est_error: f64,
}

impl GfiResult {
    fn from_parts(parts: Vec<Estimate>) -> GfiResult {
        let mut value = 0.0;
        let mut est_error = 0.0;
        for p in &parts {
            value += p.value;
            est_error += p.est_error;
        }
        GfiResult {
            value,
            contributions: parts.iter().map(|p| p.value).collect(),
            est_error,
        }
    }
}

/// A field evaluated along a line through a numeric inverse parameterization.
struct LineProfile {
    field: FieldRef,
    line: SimpleLine3D,
    axis: usize,
}

impl fmt::Debug for LineProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LineProfile(axis {})", self.axis)
    }
}

impl Profile for LineProfile {
    fn value(&self, t: f64) -> Result<f64> {
        Ok(self.value_est(t)?.0)
    }

    fn value_est(&self, t: f64) -> Result<(f64, f64)> {
        self.field.value_est(self.line.point_on(self.axis, t)?)
    }

    fn exponent(&self) -> f64 {
        0.0
    }

    fn derivative(&self) -> Result<ProfileRef> {
        Ok(Arc::new(FdProfile::new(Arc::new(LineProfile {
            field: self.field.clone(),
            line: self.line.clone(),
            axis: self.axis,
        }))))
    }

    fn is_approximate(&self) -> bool {
        true
    }
}

/// The field on `line` as a function of coordinate `axis`, extended past the
/// line's ends as far as the parameterization allows. None when that
/// coordinate is constant along the line.
pub fn restrict_to_line(field: &FieldRef, line: &SimpleLine3D, axis: usize) -> Result<Option<ProfileRef>> {
    if line.is_constant(axis) {
        return Ok(None);
    }
    if line.is_axis_parallel() {
        return Ok(Some(field.clone().along(axis, line.start_point()?)?));
    }
    if let Some(e) = field.expr() {
        if let Some(r) = line.restrict_expr(e, axis) {
            return Ok(Some(Arc::new(ExprProfile::new(&r, axis, [0.0; 3]))));
        }
    }
    Ok(Some(Arc::new(LineProfile {
        field: field.clone(),
        line: line.clone(),
        axis,
    })))
}

fn interval_gfi(pair: &KernelPair, prof: ProfileRef, a: f64, b: f64, spec: &QuadSpec) -> Result<Estimate> {
    let (value, est_error) = interval_est(&*gfi_profile(pair, prof, spec)?, a, b)?;
    Ok(Estimate { value, est_error })
}

/// Sum over axes of interval GFIs of already restricted components between
/// the coordinates of `start` and `end`.
pub fn gfi_restricted(
    kt: &KernelTriple,
    comps: &[Option<ProfileRef>; 3],
    start: Point,
    end: Point,
    spec: &QuadSpec,
) -> Result<Estimate> {
    let mut total = Estimate::ZERO;
    for k in 0..3 {
        if let Some(prof) = &comps[k] {
            total = total.add(1.0, interval_gfi(&kt[k], prof.clone(), start[k], end[k], spec)?);
        }
    }
    Ok(total)
}

fn simple_line_gfi(kt: &KernelTriple, f: &VecField, line: &SimpleLine3D, spec: &QuadSpec) -> Result<Estimate> {
    let comps = [
        restrict_to_line(&f[0], line, 0)?,
        restrict_to_line(&f[1], line, 1)?,
        restrict_to_line(&f[2], line, 2)?,
    ];
    gfi_restricted(kt, &comps, line.start_point()?, line.end_point()?, spec)
}

/// Line GFI over a piecewise simple line; one contribution per segment.
pub fn line_gfi(kt: &KernelTriple, f: &VecField, line: &PiecewiseSimpleLine, spec: &QuadSpec) -> Result<GfiResult> {
    let v = line.validate();
    if !v.is_empty() {
        return Err(Error::Geometry(v));
    }
    let parts = line
        .segments
        .iter()
        .map(|s| simple_line_gfi(kt, f, s, spec))
        .collect::<Result<Vec<_>>>()?;
    Ok(GfiResult::from_parts(parts))
}

/// Line GFI over a closed line.
pub fn circulation(kt: &KernelTriple, f: &VecField, line: &PiecewiseSimpleLine, spec: &QuadSpec) -> Result<GfiResult> {
    if !line.closed {
        return domain("circulation needs a closed line");
    }
    line_gfi(kt, f, line, spec)
}

/// u -> I_[lo(u), hi(u)] f(u, .) along the region's inner axis.
struct InnerGfi {
    pair: KernelPair,
    field: FieldRef,
    region: SimpleRegion2D,
    fixed: Point,
    claim: f64,
    spec: QuadSpec,
}

impl fmt::Debug for InnerGfi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "InnerGfi({:?})", self.field)
    }
}

impl Profile for InnerGfi {
    fn value(&self, u: f64) -> Result<f64> {
        Ok(self.value_est(u)?.0)
    }

    fn value_est(&self, u: f64) -> Result<(f64, f64)> {
        let d = &self.region.main;
        let mut base = self.fixed;
        base[d.outer_axis] = u;
        let (lo, hi) = d.inner_limits(u)?;
        let prof = self.field.clone().along(d.inner_axis, base)?;
        let r = interval_gfi(&self.pair, prof, lo, hi, &self.spec)?;
        Ok((r.value, r.est_error))
    }

    fn exponent(&self) -> f64 {
        self.claim
    }

    fn derivative(&self) -> Result<ProfileRef> {
        domain("the inner integral of a double GFI has no derivative")
    }

    fn is_zero(&self) -> bool {
        self.field.is_zero()
    }
}

/// Iterated GFI I_[a,b][u] I_[lo(u), hi(u)][v] f over a planar region; the
/// remaining coordinate is taken from `fixed`.
pub fn double_gfi(
    kt: &KernelTriple,
    f: &FieldRef,
    region: &SimpleRegion2D,
    fixed: Point,
    spec: &QuadSpec,
) -> Result<Estimate> {
    let v = region.validate();
    if !v.is_empty() {
        return Err(Error::Geometry(v));
    }
    let d = &region.main;
    let claim = if region.is_rectangle() {
        let (lo, hi) = d.inner_limits(d.outer.0)?;
        let mut base = fixed;
        base[d.inner_axis] = 0.5 * (lo + hi);
        base[d.outer_axis] = d.outer.0;
        f.exponent(d.outer_axis, base)
    } else {
        0.0
    };
    let inner: ProfileRef = Arc::new(InnerGfi {
        pair: kt[d.inner_axis].clone(),
        field: f.clone(),
        region: region.clone(),
        fixed,
        claim,
        spec: spec.tightened(),
    });
    interval_gfi(&kt[d.outer_axis], inner, d.outer.0, d.outer.1, spec)
}

/// Surface GFI: per patch, sign times the double GFI of the normal component
/// evaluated on the patch.
pub fn surface_gfi(kt: &KernelTriple, f: &VecField, patches: &[Patch], spec: &QuadSpec) -> Result<GfiResult> {
    let parts = patches
        .iter()
        .map(|p| {
            let v = p.validate();
            if !v.is_empty() {
                return Err(Error::Geometry(v));
            }
            let g = on_graph(&f[p.normal], p.normal, &p.graph);
            let r = double_gfi(kt, &g, &p.region, [0.0; 3], spec)?;
            Ok(Estimate {
                value: p.sign * r.value,
                est_error: r.est_error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GfiResult::from_parts(parts))
}

/// Flux through all six faces of a box, outward.
pub fn flux_box(kt: &KernelTriple, f: &VecField, b: &Box3D, spec: &QuadSpec) -> Result<GfiResult> {
    let v = b.validate();
    if !v.is_empty() {
        return Err(Error::Geometry(v));
    }
    surface_gfi(kt, f, &b.faces(true), spec)
}

/// p -> I_[z_lo(p), z_hi(p)][z] f(p_x, p_y, .).
#[derive(Debug)]
struct ZInterval {
    pair: KernelPair,
    field: FieldRef,
    z_lo: FieldExpr,
    z_hi: FieldExpr,
    spec: QuadSpec,
}

impl Field for ZInterval {
    fn value(&self, p: Point) -> Result<f64> {
        Ok(self.value_est(p)?.0)
    }

    fn value_est(&self, p: Point) -> Result<(f64, f64)> {
        let prof = self.field.clone().along(2, p)?;
        let r = interval_gfi(&self.pair, prof, self.z_lo.eval(&p)?, self.z_hi.eval(&p)?, &self.spec)?;
        Ok((r.value, r.est_error))
    }

    fn along(self: Arc<Self>, axis: usize, base: Point) -> Result<ProfileRef> {
        Ok(RayProfile::new(self, axis, base))
    }

    fn partial(self: Arc<Self>, _axis: usize) -> Result<FieldRef> {
        domain("partial derivative of an inner volume integral")
    }

    fn exponent(&self, axis: usize, base: Point) -> f64 {
        if self.z_lo.is_constant() && self.z_hi.is_constant() {
            let mut p = base;
            p[2] = 0.5 * (self.z_lo.eval(&base).unwrap_or(0.0) + self.z_hi.eval(&base).unwrap_or(0.0));
            self.field.exponent(axis, p)
        } else {
            0.0
        }
    }

    fn is_zero(&self) -> bool {
        self.field.is_zero()
    }

    fn depends_on(&self, axis: usize) -> bool {
        axis != 2 && (self.field.depends_on(axis) || self.z_lo.uses(axis) || self.z_hi.uses(axis))
    }
}

/// Iterated triple GFI I_x I_y I_z f over a Z-simple region.
pub fn triple_gfi(kt: &KernelTriple, f: &FieldRef, w: &ZSimpleRegion3D, spec: &QuadSpec) -> Result<Estimate> {
    let v = w.validate();
    if !v.is_empty() {
        return Err(Error::Geometry(v));
    }
    let inner: FieldRef = Arc::new(ZInterval {
        pair: kt[2].clone(),
        field: f.clone(),
        z_lo: w.z_lo.clone(),
        z_hi: w.z_hi.clone(),
        spec: spec.tightened().tightened(),
    });
    double_gfi(kt, &inner, &w.base, [0.0; 3], spec)
}

/// Triple GFI over a box.
pub fn volume_gfi(kt: &KernelTriple, f: &FieldRef, b: &Box3D, spec: &QuadSpec) -> Result<Estimate> {
    let v = b.validate();
    if !v.is_empty() {
        return Err(Error::Geometry(v));
    }
    triple_gfi(kt, f, &b.as_z_simple(), spec)
}
