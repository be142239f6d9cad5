//! Residual checks for the gradient, Green, Stokes and Gauss theorems.
//!
//! Each check computes both sides by separate code paths: boundary sides by
//! line or surface GFIs of the field itself, interior sides by GFIs of the
//! field's GF derivatives.

use crate::error::{domain, Error, Result};
use crate::fields::{linear, on_graph, FieldRef, VecField};
use crate::geometry::{Box3D, PiecewiseSimpleLine, PiecewiseSimpleSurface, PolygonalChain, SimpleLine3D, SimpleRegion2D, ZSimpleRegion3D};
use crate::gfint::{circulation, double_gfi, flux_box, gfi_restricted, line_gfi, surface_gfi, triple_gfi, Estimate};
use crate::quad::QuadSpec;
use crate::vectorops::{curl_field, div_field, grad_field, line_gradient_profile, surface_curl_field, KernelTriple};
use crate::fields::axis_gfd;
use fieldlang::FieldExpr;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub kernel: String,
    pub geometry: String,
    pub field: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub est_numerical_error: f64,
    pub note: String,
}

impl TheoremReport {
    #[allow(clippy::too_many_arguments)]
    fn new(
        theorem: &str,
        kt: &KernelTriple,
        geometry: String,
        field: String,
        lhs: Estimate,
        rhs: Estimate,
        note: &str,
    ) -> TheoremReport {
        let abs_residual = (lhs.value - rhs.value).abs();
        TheoremReport {
            theorem: theorem.into(),
            kernel: kt.label(),
            geometry,
            field,
            lhs: lhs.value,
            rhs: rhs.value,
            abs_residual,
            rel_residual: abs_residual / 1f64.max(lhs.value.abs()).max(rhs.value.abs()),
            est_numerical_error: lhs.est_error + rhs.est_error,
            note: note.into(),
        }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.abs_residual < tol
    }
}

fn text(f: &FieldRef) -> String {
    match f.expr() {
        Some(e) => e.to_string(),
        None => format!("{f:?}"),
    }
}

fn vec_text(f: &VecField) -> String {
    format!("({}, {}, {})", text(&f[0]), text(&f[1]), text(&f[2]))
}

fn exact(value: f64) -> Estimate {
    Estimate { value, est_error: 0.0 }
}

fn check(v: Vec<String>) -> Result<()> {
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::Geometry(v))
    }
}

fn from_result(r: crate::gfint::GfiResult) -> Estimate {
    Estimate {
        value: r.value,
        est_error: r.est_error,
    }
}

fn endpoint_difference(u: &FieldRef, line: &PiecewiseSimpleLine) -> Result<Estimate> {
    let (Some(first), Some(last)) = (line.segments.first(), line.segments.last()) else {
        return domain("empty line");
    };
    Ok(exact(u.value(last.end_point()?)? - u.value(first.start_point()?)?))
}

/// Regional gradient theorem on a chain of axis-parallel segments:
/// line GFI of the regional gradient against U(end) - U(start).
pub fn check_gradient_regional(
    kt: &KernelTriple,
    u: &FieldRef,
    chain: &PolygonalChain,
    spec: &QuadSpec,
) -> Result<TheoremReport> {
    check(chain.validate())?;
    for i in 0..chain.vertices.len() - 1 {
        if chain.vertices[i] != chain.vertices[i + 1] && chain.segment_axis(i).is_none() {
            return domain(format!(
                "segment {i} is not parallel to an axis; the regional gradient theorem does not apply"
            ));
        }
    }
    let line = PiecewiseSimpleLine::from_chain(chain)?;
    let mut r = gradient_regional_report(kt, u, &line, spec)?;
    r.geometry = format!("chain {:?}", chain.vertices);
    Ok(r)
}

/// The regional gradient comparison on any piecewise line, without the
/// axis-parallel restriction. Used as a negative control.
pub fn gradient_regional_report(
    kt: &KernelTriple,
    u: &FieldRef,
    line: &PiecewiseSimpleLine,
    spec: &QuadSpec,
) -> Result<TheoremReport> {
    let grad = grad_field(kt, u, &spec.tightened())?;
    let lhs = from_result(line_gfi(kt, &grad, line, spec)?);
    let rhs = endpoint_difference(u, line)?;
    Ok(TheoremReport::new(
        "gradient_regional",
        kt,
        format!("piecewise line with {} segments", line.segments.len()),
        text(u),
        lhs,
        rhs,
        "rhs = U(end) - U(start)",
    ))
}

/// Line gradient theorem: line GFI of the line GF gradient against U(B) - U(A).
pub fn check_gradient_line(kt: &KernelTriple, u: &FieldRef, line: &SimpleLine3D, spec: &QuadSpec) -> Result<TheoremReport> {
    check(line.validate())?;
    let inner = spec.tightened();
    let comps = [
        line_gradient_profile(&kt[0], u, line, 0, &inner)?,
        line_gradient_profile(&kt[1], u, line, 1, &inner)?,
        line_gradient_profile(&kt[2], u, line, 2, &inner)?,
    ];
    let (a, b) = (line.start_point()?, line.end_point()?);
    let lhs = gfi_restricted(kt, &comps, a, b, spec)?;
    let rhs = exact(u.value(b)? - u.value(a)?);
    Ok(TheoremReport::new(
        "gradient_line",
        kt,
        format!("simple line {a:?} -> {b:?}"),
        text(u),
        lhs,
        rhs,
        "rhs = U(B) - U(A) with A the start point",
    ))
}

/// Green's theorem on a region in the (x, y) plane: counterclockwise
/// circulation against I(D^x F_y) - I(D^y F_x). The x-derivative term is
/// integrated with the region described as x between functions of y.
pub fn check_green(kt: &KernelTriple, f: &VecField, region: &SimpleRegion2D, spec: &QuadSpec) -> Result<TheoremReport> {
    check(region.validate())?;
    if region.u_axis() != 0 || region.v_axis() != 1 {
        return domain("Green's theorem needs a region described as y between functions of x");
    }
    let Some(by_y) = region.transposed() else {
        return domain("Green's theorem needs both descriptions of the region");
    };
    let boundary = region.boundary(&FieldExpr::num(0.0))?;
    let lhs = from_result(circulation(kt, f, &boundary, spec)?);
    let inner = spec.tightened();
    let dxfy = axis_gfd(&kt[0], &f[1], 0, &inner)?;
    let dyfx = axis_gfd(&kt[1], &f[0], 1, &inner)?;
    let rhs = double_gfi(kt, &dxfy, &by_y, [0.0; 3], spec)?.add_neg(double_gfi(kt, &dyfx, region, [0.0; 3], spec)?);
    let geometry = if region.is_rectangle() {
        let m = &region.main;
        let (c, d) = m.inner_limits(m.outer.0)?;
        format!("rectangle [{}, {}] x [{c}, {d}]", m.outer.0, m.outer.1)
    } else {
        "simple region in the (x, y) plane".into()
    };
    let note = if region.is_rectangle() {
        "counterclockwise boundary: bottom edge in +x, right in +y, top in -x, left in -y; rhs = I(D^x F_y) - I(D^y F_x)"
    } else {
        "counterclockwise boundary; rhs = I(D^x F_y) - I(D^y F_x)"
    };
    Ok(TheoremReport::new(
        "green",
        kt,
        geometry,
        format!("({}, {})", text(&f[0]), text(&f[1])),
        lhs,
        rhs,
        note,
    ))
}

trait AddNeg {
    fn add_neg(self, other: Estimate) -> Estimate;
}

impl AddNeg for Estimate {
    fn add_neg(self, other: Estimate) -> Estimate {
        Estimate {
            value: self.value - other.value,
            est_error: self.est_error + other.est_error,
        }
    }
}

/// Surfaces accepted by the Stokes check.
#[derive(Debug, Clone)]
pub enum StokesSurface {
    /// The five faces of a box other than its bottom (lower z) face.
    BoxWithoutBottom(Box3D),
    Surface(PiecewiseSimpleSurface),
}

/// Stokes' theorem: circulation over the boundary against the surface GFI of
/// the regional curl (box without bottom) or the surface curl (graph patches).
pub fn check_stokes(kt: &KernelTriple, f: &VecField, surface: &StokesSurface, spec: &QuadSpec) -> Result<TheoremReport> {
    let inner = spec.tightened();
    let (lhs, rhs, geometry, note) = match surface {
        StokesSurface::BoxWithoutBottom(b) => {
            check(b.validate())?;
            let lhs = from_result(circulation(kt, f, &b.bottom_loop()?, spec)?);
            let curl = curl_field(kt, f, &inner)?;
            let rhs = from_result(surface_gfi(kt, &curl, &b.faces(false), spec)?);
            (
                lhs,
                rhs,
                format!("box without bottom {:?} -> {:?}", b.lo, b.hi),
                "outward normals; boundary counterclockwise seen from above",
            )
        }
        StokesSurface::Surface(s) => {
            check(s.validate())?;
            let lhs = from_result(circulation(kt, f, &s.boundary()?, spec)?);
            let mut rhs = Estimate {
                value: 0.0,
                est_error: 0.0,
            };
            for p in &s.patches {
                let c = surface_curl_field(kt, f, p, &inner)?;
                let r = double_gfi(kt, &c, &p.region, [0.0; 3], spec)?;
                rhs.value += p.sign * r.value;
                rhs.est_error += r.est_error;
            }
            (
                lhs,
                rhs,
                format!("surface with {} patches", s.patches.len()),
                "boundary oriented with the patch normals; rhs uses the surface curl",
            )
        }
    };
    Ok(TheoremReport::new("stokes", kt, geometry, vec_text(f), lhs, rhs, note))
}

/// Volumes accepted by the Gauss check.
#[derive(Debug, Clone)]
pub enum GaussVolume {
    Box(Box3D),
    /// Only fields with F_x = F_y = 0 are supported on a Z-simple region.
    ZSimple(ZSimpleRegion3D),
}

/// Gauss' theorem: outward flux against the triple GFI of the divergence.
pub fn check_gauss(kt: &KernelTriple, f: &VecField, volume: &GaussVolume, spec: &QuadSpec) -> Result<TheoremReport> {
    let div = div_field(kt, f, &spec.tightened())?;
    let (lhs, rhs, geometry) = match volume {
        GaussVolume::Box(b) => {
            check(b.validate())?;
            let lhs = from_result(flux_box(kt, f, b, spec)?);
            let rhs = triple_gfi(kt, &div, &b.as_z_simple(), spec)?;
            (lhs, rhs, format!("box {:?} -> {:?}", b.lo, b.hi))
        }
        GaussVolume::ZSimple(w) => {
            check(w.validate())?;
            if !(f[0].is_zero() && f[1].is_zero()) {
                return domain("Gauss' theorem on a Z-simple region supports fields (0, 0, F_z) only");
            }
            let top = on_graph(&f[2], 2, &w.z_hi);
            let bottom = on_graph(&f[2], 2, &w.z_lo);
            let jump = linear(vec![(1.0, top), (-1.0, bottom)]);
            let lhs = double_gfi(kt, &jump, &w.base, [0.0; 3], spec)?;
            let rhs = triple_gfi(kt, &div, w, spec)?;
            (lhs, rhs, "z-simple region".to_string())
        }
    };
    Ok(TheoremReport::new(
        "gauss",
        kt,
        geometry,
        vec_text(f),
        lhs,
        rhs,
        "outward normals",
    ))
}

/// Flux side of the Gauss check through an explicit surface, for callers
/// assembling their own closed surfaces.
pub fn flux(kt: &KernelTriple, f: &VecField, s: &PiecewiseSimpleSurface, spec: &QuadSpec) -> Result<f64> {
    check(s.validate())?;
    Ok(surface_gfi(kt, f, &s.patches, spec)?.value)
}
