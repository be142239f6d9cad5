//! General fractional differential vector operators in Cartesian coordinates.
//!
//! Regional operators act axis-wise with the other coordinates frozen. Each
//! operator has a field-building form (`*_field`) that composes, and a
//! point-evaluation form. Nested operators use a 10x tighter inner spec.

use crate::error::{domain, Result};
use crate::fields::{axis_conv, axis_gfd, linear, on_graph, FieldRef, VecField};
use crate::geometry::{Patch, Point, SimpleLine3D};
use crate::gfc1d::{leibniz_defect, ConvProfile, ProfileRef};
use crate::kernels::{KernelPair, Side};
use crate::quad::QuadSpec;
use serde::Serialize;

/// One kernel pair per coordinate axis.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelTriple(pub [KernelPair; 3]);

impl KernelTriple {
    pub fn uniform(pair: KernelPair) -> KernelTriple {
        KernelTriple([pair.clone(), pair.clone(), pair])
    }

    pub fn power_rl(alpha: f64) -> Result<KernelTriple> {
        Ok(KernelTriple::uniform(KernelPair::power_rl(alpha)?))
    }

    pub fn classical() -> KernelTriple {
        KernelTriple::uniform(KernelPair::classical())
    }

    /// Checks each pair with the Sonin verifier.
    pub fn verified(self, spec: &QuadSpec) -> Result<KernelTriple> {
        for pair in &self.0 {
            KernelPair::verified(pair.family(), pair.params(), spec)?;
        }
        Ok(self)
    }

    pub fn label(&self) -> String {
        let [a, b, c] = &self.0;
        if a == b && b == c {
            a.label()
        } else {
            format!("({}, {}, {})", a.label(), b.label(), c.label())
        }
    }
}

impl std::ops::Index<usize> for KernelTriple {
    type Output = KernelPair;

    fn index(&self, k: usize) -> &KernelPair {
        &self.0[k]
    }
}

/// Three components evaluated at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VecResult {
    pub components: [f64; 3],
    pub point: Point,
}

impl VecResult {
    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

fn eval_vec(f: &VecField, p: Point) -> Result<VecResult> {
    let mut components = [0.0; 3];
    for k in 0..3 {
        components[k] = f[k].value(p)?;
    }
    if !components.iter().all(|c| c.is_finite()) {
        return domain(format!("non-finite components {components:?} at {p:?}"));
    }
    Ok(VecResult { components, point: p })
}

fn check_point(p: Point) -> Result<()> {
    if p.iter().all(|c| c.is_finite() && *c >= 0.0) {
        Ok(())
    } else {
        domain(format!("point {p:?} is not in the closed positive octant"))
    }
}

/// Regional GF gradient as a vector field.
pub fn grad_field(kt: &KernelTriple, u: &FieldRef, spec: &QuadSpec) -> Result<VecField> {
    Ok([
        axis_gfd(&kt[0], u, 0, spec)?,
        axis_gfd(&kt[1], u, 1, spec)?,
        axis_gfd(&kt[2], u, 2, spec)?,
    ])
}

/// GF divergence as a scalar field.
pub fn div_field(kt: &KernelTriple, f: &VecField, spec: &QuadSpec) -> Result<FieldRef> {
    let terms = (0..3)
        .map(|k| Ok((1.0, axis_gfd(&kt[k], &f[k], k, spec)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(linear(terms))
}

/// Regional GF curl: component k = D^m F_n - D^n F_m for cyclic (k, m, n).
pub fn curl_field(kt: &KernelTriple, f: &VecField, spec: &QuadSpec) -> Result<VecField> {
    let comp = |k: usize| -> Result<FieldRef> {
        let (m, n) = ((k + 1) % 3, (k + 2) % 3);
        Ok(linear(vec![
            (1.0, axis_gfd(&kt[m], &f[n], m, spec)?),
            (-1.0, axis_gfd(&kt[n], &f[m], n, spec)?),
        ]))
    };
    Ok([comp(0)?, comp(1)?, comp(2)?])
}

/// Scalar GF Laplacian Div(Grad U).
pub fn laplacian_field(kt: &KernelTriple, u: &FieldRef, spec: &QuadSpec) -> Result<FieldRef> {
    div_field(kt, &grad_field(kt, u, &spec.tightened())?, spec)
}

pub fn grad_regional(kt: &KernelTriple, u: &FieldRef, p: Point, spec: &QuadSpec) -> Result<VecResult> {
    check_point(p)?;
    eval_vec(&grad_field(kt, u, spec)?, p)
}

pub fn divergence(kt: &KernelTriple, f: &VecField, p: Point, spec: &QuadSpec) -> Result<f64> {
    check_point(p)?;
    div_field(kt, f, spec)?.value(p)
}

pub fn curl_regional(kt: &KernelTriple, f: &VecField, p: Point, spec: &QuadSpec) -> Result<VecResult> {
    check_point(p)?;
    eval_vec(&curl_field(kt, f, spec)?, p)
}

pub fn laplacian_scalar(kt: &KernelTriple, u: &FieldRef, p: Point, spec: &QuadSpec) -> Result<f64> {
    check_point(p)?;
    laplacian_field(kt, u, spec)?.value(p)
}

/// Regional curl on a region with lower corner `offset`: interval GFDs
/// D_[offset_m, x_m] replace the half-line ones.
pub fn curl_regional_offset(
    kt: &KernelTriple,
    f: &VecField,
    offset: Point,
    p: Point,
    spec: &QuadSpec,
) -> Result<VecResult> {
    check_point(p)?;
    let d = |m: usize, field: &FieldRef| -> Result<f64> {
        if !(p[m] >= offset[m]) {
            return domain(format!("point {p:?} lies below the region corner {offset:?}"));
        }
        let prof = field.clone().along(m, p)?;
        crate::gfc1d::gfd_interval(&kt[m], &prof, offset[m], p[m], spec)
    };
    let mut components = [0.0; 3];
    for k in 0..3 {
        let (m, n) = ((k + 1) % 3, (k + 2) % 3);
        components[k] = d(m, &f[n])? - d(n, &f[m])?;
    }
    Ok(VecResult { components, point: p })
}

/// Profile of the line GF gradient component along `axis`: K_axis convolved
/// with the restriction of dU/d(axis) to the line. None for a coordinate that
/// is constant along the line.
pub fn line_gradient_profile(
    pair: &KernelPair,
    u: &FieldRef,
    line: &SimpleLine3D,
    axis: usize,
    spec: &QuadSpec,
) -> Result<Option<ProfileRef>> {
    let Some(restricted) = crate::gfint::restrict_to_line(&u.clone().partial(axis)?, line, axis)? else {
        return Ok(None);
    };
    if pair.is_classical() {
        return Ok(Some(restricted));
    }
    Ok(Some(ConvProfile::new(pair, Side::K, restricted, spec)?))
}

/// Line GF gradient at the point of `line` with primary parameter `s`.
pub fn grad_line(kt: &KernelTriple, u: &FieldRef, line: &SimpleLine3D, s: f64, spec: &QuadSpec) -> Result<VecResult> {
    let v = line.validate();
    if !v.is_empty() {
        return Err(crate::Error::Geometry(v));
    }
    let p = line.point(s)?;
    let mut components = [0.0; 3];
    for k in 0..3 {
        if let Some(prof) = line_gradient_profile(&kt[k], u, line, k, spec)? {
            components[k] = prof.value(p[k])?;
        }
    }
    Ok(VecResult { components, point: p })
}

/// Surface GF curl component along a patch's normal axis k, at the patch
/// point over `p`: K_m * (dF_n/dm on the surface) - K_n * (dF_m/dn on the surface).
pub fn surface_curl_component(
    kt: &KernelTriple,
    f: &VecField,
    patch: &Patch,
    p: Point,
    spec: &QuadSpec,
) -> Result<f64> {
    surface_curl_field(kt, f, patch, spec)?.value(p)
}

/// Surface GF curl summed over the patches whose projection contains `p`.
pub fn curl_surface(
    kt: &KernelTriple,
    f: &VecField,
    patches: &[Patch],
    p: Point,
    spec: &QuadSpec,
) -> Result<VecResult> {
    check_point(p)?;
    let mut components = [0.0; 3];
    for patch in patches {
        let d = &patch.region.main;
        let (u, v) = (p[d.outer_axis], p[d.inner_axis]);
        if u < d.outer.0 || u > d.outer.1 {
            continue;
        }
        let (lo, hi) = d.inner_limits(u)?;
        if v < lo || v > hi {
            continue;
        }
        let mut q = p;
        q[patch.normal] = patch.graph.eval(&p)?;
        components[patch.normal] += surface_curl_component(kt, f, patch, q, spec)?;
    }
    Ok(VecResult { components, point: p })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityDefects {
    pub curl_grad: VecResult,
    pub div_curl: f64,
    pub double_curl_gap: VecResult,
}

/// Curl(Grad U), Div(Curl F) and Curl(Curl F) - (Grad(Div F) - Lap F) at p.
pub fn identity_defects(
    kt: &KernelTriple,
    u: &FieldRef,
    f: &VecField,
    p: Point,
    spec: &QuadSpec,
) -> Result<IdentityDefects> {
    check_point(p)?;
    let inner = spec.tightened();
    let curl_grad = eval_vec(&curl_field(kt, &grad_field(kt, u, &inner)?, spec)?, p)?;
    let curl_f = curl_field(kt, f, &inner)?;
    let div_curl = div_field(kt, &curl_f, spec)?.value(p)?;
    let curl_curl = eval_vec(&curl_field(kt, &curl_f, spec)?, p)?;
    let grad_div = eval_vec(&grad_field(kt, &div_field(kt, f, &inner)?, spec)?, p)?;
    let mut gap = [0.0; 3];
    for k in 0..3 {
        let lap = laplacian_field(kt, &f[k], spec)?.value(p)?;
        gap[k] = curl_curl.components[k] - (grad_div.components[k] - lap);
    }
    Ok(IdentityDefects {
        curl_grad,
        div_curl,
        double_curl_gap: VecResult { components: gap, point: p },
    })
}

/// Grad(f g) - (Grad f) g - f (Grad g) at p.
pub fn leibniz_witness(kt: &KernelTriple, f: &FieldRef, g: &FieldRef, p: Point, spec: &QuadSpec) -> Result<VecResult> {
    check_point(p)?;
    let mut components = [0.0; 3];
    for k in 0..3 {
        if kt[k].is_classical() || p[k] == 0.0 {
            continue;
        }
        let fp = f.clone().along(k, p)?;
        let gp = g.clone().along(k, p)?;
        components[k] = leibniz_defect(&kt[k], &fp, &gp, p[k], spec)?;
    }
    Ok(VecResult { components, point: p })
}

/// The surface GF curl component of a patch as a field of the two
/// coordinates spanning the patch.
pub fn surface_curl_field(kt: &KernelTriple, f: &VecField, patch: &Patch, spec: &QuadSpec) -> Result<FieldRef> {
    let k = patch.normal;
    let (m, n) = ((k + 1) % 3, (k + 2) % 3);
    let term = |along: usize, comp: usize| -> Result<FieldRef> {
        let partial = f[comp].clone().partial(along)?;
        Ok(axis_conv(&kt[along], &on_graph(&partial, k, &patch.graph), along, spec))
    };
    Ok(linear(vec![(1.0, term(m, n)?), (-1.0, term(n, m)?)]))
}
