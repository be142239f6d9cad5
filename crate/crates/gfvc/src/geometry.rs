//! Lines, regions, surfaces and volumes that carry the integrals, with
//! grid-based validity checks.
//!
//! Everything lives in the closed positive octant. Curves and graphs are
//! field-language expressions; a curve parameterized by its primary axis is
//! inverted symbolically when the relation is affine and numerically otherwise.

use crate::error::{domain, Error, Result};
use fieldlang::FieldExpr;
use std::sync::OnceLock;

pub type Point = [f64; 3];

/// Samples per interval for invariant checks.
pub const CHECK_GRID: usize = 64;
const ENDPOINT_TOL: f64 = 1e-10;
const INVERSE_TOL: f64 = 1e-12;
const AXIS_NAMES: [&str; 3] = ["x", "y", "z"];

fn grid(lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    (0..=CHECK_GRID).map(move |i| lo + (hi - lo) * i as f64 / CHECK_GRID as f64)
}

fn at(e: &FieldExpr, var: usize, s: f64) -> Result<f64> {
    let mut p = [0.0; 3];
    p[var] = s;
    Ok(e.eval(&p)?)
}

fn close(a: &Point, b: &Point) -> bool {
    (0..3).all(|i| (a[i] - b[i]).abs() <= ENDPOINT_TOL * a[i].abs().max(b[i].abs()).max(1.0))
}

/// Inverse of a strictly monotone expression in one variable.
#[derive(Debug, Clone)]
pub struct MonotoneInverse {
    f: FieldExpr,
    df: FieldExpr,
    var: usize,
    lo: f64,
    hi: f64,
}

/// Build the inverse of `f(var)` on `[lo, hi]`; fails unless f is strictly
/// monotone on the check grid.
pub fn invert_monotone(f: &FieldExpr, var: usize, lo: f64, hi: f64) -> Result<MonotoneInverse> {
    if !(lo < hi) {
        return domain(format!("inverse needs lo < hi, got [{lo}, {hi}]"));
    }
    let vals = grid(lo, hi).map(|s| at(f, var, s)).collect::<Result<Vec<_>>>()?;
    let up = vals.windows(2).all(|w| w[1] > w[0]);
    let down = vals.windows(2).all(|w| w[1] < w[0]);
    if !(up || down) {
        return domain(format!("`{f}` is not strictly monotone on [{lo}, {hi}]"));
    }
    Ok(MonotoneInverse {
        f: f.clone(),
        df: f.diff(var),
        var,
        lo,
        hi,
    })
}

impl MonotoneInverse {
    /// The s with f(s) = y, searching outside the construction interval if needed.
    pub fn eval(&self, y: f64) -> Result<f64> {
        let g = |s: f64| -> Result<f64> { Ok(at(&self.f, self.var, s)? - y) };
        let (mut a, mut b) = (self.lo, self.hi);
        let (mut ga, mut gb) = (g(a)?, g(b)?);
        let mut tries = 0;
        while ga * gb > 0.0 {
            tries += 1;
            if tries > 60 {
                return domain(format!("no preimage of {y} under `{}`", self.f));
            }
            let w = b - a;
            // move the end whose value is closer to y
            if ga.abs() < gb.abs() {
                let next = if a > 0.0 { (a - w).max(0.0) } else { a - w };
                b = a;
                gb = ga;
                a = next;
                ga = g(a)?;
            } else {
                a = b;
                ga = gb;
                b += w;
                gb = g(b)?;
            }
            if !(ga.is_finite() && gb.is_finite()) {
                return domain(format!("no preimage of {y} under `{}`", self.f));
            }
        }
        if ga == 0.0 {
            return Ok(a);
        }
        if gb == 0.0 {
            return Ok(b);
        }
        let mut x = 0.5 * (a + b);
        for _ in 0..200 {
            let gx = g(x)?;
            if gx == 0.0 {
                return Ok(x);
            }
            if (gx < 0.0) == (ga < 0.0) {
                a = x;
                ga = gx;
            } else {
                b = x;
            }
            if b - a <= INVERSE_TOL * x.abs().max(1.0) * 1e-3 {
                break;
            }
            let d = at(&self.df, self.var, x)?;
            let newton = x - gx / d;
            let next = if newton > a && newton < b && newton.is_finite() {
                newton
            } else {
                0.5 * (a + b)
            };
            if (next - x).abs() <= INVERSE_TOL * 1e-3 * x.abs().max(1.0) {
                return Ok(next);
            }
            x = next;
        }
        Ok(x)
    }
}

#[derive(Debug, Clone)]
enum Inverse {
    Constant,
    Primary,
    Affine { slope: f64, offset: f64 },
    Numeric(MonotoneInverse),
}

/// A curve given as three coordinate expressions of its primary coordinate,
/// traversed from `start` to `end` in that coordinate (either order).
#[derive(Debug, Clone)]
pub struct SimpleLine3D {
    primary: usize,
    coords: [FieldExpr; 3],
    start: f64,
    end: f64,
    declared: Option<(Point, Point)>,
    inverses: OnceLock<Vec<Result<Inverse>>>,
}

impl SimpleLine3D {
    /// `coords[i]` are expressions in `Var(primary)`; the primary entry is ignored.
    pub fn new(primary: usize, coords: [FieldExpr; 3], start: f64, end: f64) -> SimpleLine3D {
        let mut coords = coords;
        coords[primary] = FieldExpr::var(primary);
        SimpleLine3D {
            primary,
            coords,
            start,
            end,
            declared: None,
            inverses: OnceLock::new(),
        }
    }

    /// Straight segment from `a` to `b`, parameterized by the axis of largest change.
    pub fn segment(a: Point, b: Point) -> Result<SimpleLine3D> {
        let primary = (0..3)
            .max_by(|&i, &j| (b[i] - a[i]).abs().total_cmp(&(b[j] - a[j]).abs()))
            .unwrap_or(0);
        let span = b[primary] - a[primary];
        if span == 0.0 {
            return domain(format!("segment {a:?} -> {b:?} has zero length"));
        }
        let coords = std::array::from_fn(|i| {
            if a[i] == b[i] {
                FieldExpr::num(a[i])
            } else {
                let slope = (b[i] - a[i]) / span;
                FieldExpr::add(
                    FieldExpr::mul(
                        FieldExpr::num(slope),
                        FieldExpr::sub(FieldExpr::var(primary), FieldExpr::num(a[primary])),
                    ),
                    FieldExpr::num(a[i]),
                )
            }
        });
        Ok(SimpleLine3D::new(primary, coords, a[primary], b[primary]).with_endpoints(a, b))
    }

    /// Declare the end points; they are checked by [`validate`](Self::validate)
    /// and used as the exact integration limits.
    pub fn with_endpoints(mut self, a: Point, b: Point) -> SimpleLine3D {
        self.declared = Some((a, b));
        self
    }

    pub fn primary(&self) -> usize {
        self.primary
    }

    pub fn coords(&self) -> &[FieldExpr; 3] {
        &self.coords
    }

    pub fn param_range(&self) -> (f64, f64) {
        (self.start, self.end)
    }

    pub fn reversed(&self) -> SimpleLine3D {
        let mut r = SimpleLine3D::new(self.primary, self.coords.clone(), self.end, self.start);
        r.declared = self.declared.map(|(a, b)| (b, a));
        r
    }

    pub fn point(&self, s: f64) -> Result<Point> {
        let mut q = [0.0; 3];
        q[self.primary] = s;
        let mut out = [0.0; 3];
        for i in 0..3 {
            out[i] = self.coords[i].eval(&q)?;
        }
        Ok(out)
    }

    pub fn start_point(&self) -> Result<Point> {
        match self.declared {
            Some((a, _)) => Ok(a),
            None => self.point(self.start),
        }
    }

    pub fn end_point(&self) -> Result<Point> {
        match self.declared {
            Some((_, b)) => Ok(b),
            None => self.point(self.end),
        }
    }

    /// True when coordinate `axis` does not change along the line.
    pub fn is_constant(&self, axis: usize) -> bool {
        axis != self.primary && !self.coords[axis].uses(self.primary)
    }

    pub fn is_axis_parallel(&self) -> bool {
        (0..3).all(|i| i == self.primary || self.is_constant(i))
    }

    fn inverse(&self, axis: usize) -> Result<&Inverse> {
        let all = self.inverses.get_or_init(|| (0..3).map(|i| self.build_inverse(i)).collect());
        all[axis].as_ref().map_err(Clone::clone)
    }

    fn build_inverse(&self, axis: usize) -> Result<Inverse> {
        if axis == self.primary {
            return Ok(Inverse::Primary);
        }
        if self.is_constant(axis) {
            return Ok(Inverse::Constant);
        }
        let c = &self.coords[axis];
        let d = c.diff(self.primary);
        if d.is_constant() {
            let slope = d.eval(&[0.0; 3])?;
            if slope != 0.0 {
                let offset = at(c, self.primary, 0.0)?;
                return Ok(Inverse::Affine { slope, offset });
            }
            return Ok(Inverse::Constant);
        }
        let (lo, hi) = (self.start.min(self.end), self.start.max(self.end));
        Ok(Inverse::Numeric(invert_monotone(c, self.primary, lo, hi)?))
    }

    /// Primary parameter at which coordinate `axis` equals `t`.
    pub fn param_of(&self, axis: usize, t: f64) -> Result<f64> {
        match self.inverse(axis)? {
            Inverse::Primary => Ok(t),
            Inverse::Constant => domain(format!(
                "coordinate {} is constant along the line",
                AXIS_NAMES[axis]
            )),
            Inverse::Affine { slope, offset } => Ok((t - offset) / slope),
            Inverse::Numeric(inv) => inv.eval(t),
        }
    }

    /// The primary parameter as an expression in `Var(axis)`, when one exists.
    pub fn param_expr(&self, axis: usize) -> Option<FieldExpr> {
        match self.inverse(axis).ok()? {
            Inverse::Primary => Some(FieldExpr::var(axis)),
            Inverse::Affine { slope, offset } => Some(FieldExpr::div(
                FieldExpr::sub(FieldExpr::var(axis), FieldExpr::num(*offset)),
                FieldExpr::num(*slope),
            )),
            _ => None,
        }
    }

    /// Point of the (extended) line whose coordinate `axis` equals `t`.
    pub fn point_on(&self, axis: usize, t: f64) -> Result<Point> {
        self.point(self.param_of(axis, t)?)
    }

    /// `f` restricted to the line as an expression in `Var(axis)`, when the
    /// inverse parameterization is symbolic.
    pub fn restrict_expr(&self, f: &FieldExpr, axis: usize) -> Option<FieldExpr> {
        let s = self.param_expr(axis)?;
        let mut sub = [FieldExpr::var(0), FieldExpr::var(1), FieldExpr::var(2)];
        sub[self.primary] = s;
        let along: [FieldExpr; 3] = std::array::from_fn(|i| self.coords[i].substitute(&sub));
        Some(f.substitute(&along))
    }

    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let (lo, hi) = (self.start.min(self.end), self.start.max(self.end));
        if !(lo >= 0.0 && hi > lo) {
            out.push(format!("parameter range [{}, {}] must be nonempty in [0, inf)", self.start, self.end));
            return out;
        }
        for i in 0..3 {
            let name = AXIS_NAMES[i];
            for s in grid(lo, hi) {
                match at(&self.coords[i], self.primary, s) {
                    Ok(v) if v >= -ENDPOINT_TOL && v.is_finite() => {}
                    Ok(v) => {
                        out.push(format!("coordinate {name} = {v} at parameter {s} is not in [0, inf)"));
                        break;
                    }
                    Err(e) => {
                        out.push(format!("coordinate {name} at parameter {s}: {e}"));
                        break;
                    }
                }
            }
            if i == self.primary || self.is_constant(i) {
                continue;
            }
            // Differentiability is required on the open interval only, so the
            // derivative may blow up at the ends (sqrt at 0).
            let d = self.coords[i].diff(self.primary);
            let samples: Vec<f64> = grid(lo, hi).collect();
            let last = samples.len() - 1;
            let mut ds = Vec::with_capacity(samples.len());
            let mut broken = false;
            for (j, &s) in samples.iter().enumerate() {
                match at(&d, self.primary, s) {
                    Ok(v) if v.is_finite() => ds.push(v),
                    _ if j == 0 || j == last => {}
                    _ => broken = true,
                }
            }
            if broken {
                out.push(format!("derivative of coordinate {name} is not evaluable inside [{lo}, {hi}]"));
                continue;
            }
            if ds.iter().all(|v| *v == 0.0) {
                continue;
            }
            let pos = ds.iter().any(|v| *v > 0.0);
            let neg = ds.iter().any(|v| *v < 0.0);
            if pos && neg {
                out.push(format!("derivative of coordinate {name} changes sign on [{lo}, {hi}]"));
            } else if ds.len() > 2 && ds[1..ds.len() - 1].iter().any(|v| *v == 0.0) {
                out.push(format!("derivative of coordinate {name} vanishes inside [{lo}, {hi}]"));
            }
        }
        if let Some((a, b)) = self.declared {
            for (label, decl, s) in [("start", a, self.start), ("end", b, self.end)] {
                match self.point(s) {
                    Ok(p) if close(&p, &decl) => {}
                    Ok(p) => out.push(format!("declared {label} point {decl:?} differs from {p:?}")),
                    Err(e) => out.push(format!("{label} point: {e}")),
                }
            }
        }
        out
    }

    pub fn validated(self) -> Result<SimpleLine3D> {
        let v = self.validate();
        if v.is_empty() {
            Ok(self)
        } else {
            Err(Error::Geometry(v))
        }
    }
}

/// An ordered list of vertices joined by straight segments.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonalChain {
    pub vertices: Vec<Point>,
    /// Zero-length segments are accepted and contribute nothing.
    pub allow_zero_segments: bool,
}

impl PolygonalChain {
    pub fn new(vertices: Vec<Point>) -> PolygonalChain {
        PolygonalChain {
            vertices,
            allow_zero_segments: false,
        }
    }

    pub fn start(&self) -> Point {
        self.vertices[0]
    }

    pub fn end(&self) -> Point {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn is_closed(&self) -> bool {
        self.vertices.len() > 2 && self.start() == self.end()
    }

    /// Axis of segment `i`, or None when it is not parallel to an axis.
    pub fn segment_axis(&self, i: usize) -> Option<usize> {
        let (a, b) = (self.vertices[i], self.vertices[i + 1]);
        let moving: Vec<usize> = (0..3).filter(|&k| a[k] != b[k]).collect();
        match moving.as_slice() {
            [k] => Some(*k),
            _ => None,
        }
    }

    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.vertices.len() < 2 {
            out.push("a chain needs at least 2 vertices".into());
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if !v.iter().all(|c| c.is_finite() && *c >= 0.0) {
                out.push(format!("vertex {i} {v:?} is not in the closed positive octant"));
            }
        }
        if !self.allow_zero_segments {
            for (i, w) in self.vertices.windows(2).enumerate() {
                if w[0] == w[1] {
                    out.push(format!("segment {i} has zero length"));
                }
            }
        }
        out
    }
}

/// Split an axis-parallel chain into elementary broken lines: maximal runs of
/// at most three segments along pairwise different axes.
pub fn elementary_decomposition(chain: &PolygonalChain) -> Result<Vec<PolygonalChain>> {
    let v = chain.validate();
    if !v.is_empty() {
        return Err(Error::Geometry(v));
    }
    let n = chain.vertices.len() - 1;
    let mut runs = Vec::new();
    let mut current = vec![chain.vertices[0]];
    let mut used: Vec<usize> = Vec::new();
    for i in 0..n {
        let (a, b) = (chain.vertices[i], chain.vertices[i + 1]);
        let axis = if a == b {
            None
        } else {
            match chain.segment_axis(i) {
                Some(k) => Some(k),
                None => return domain(format!("segment {i} {a:?} -> {b:?} is not parallel to an axis")),
            }
        };
        if let Some(k) = axis {
            if used.contains(&k) {
                runs.push(PolygonalChain {
                    vertices: std::mem::replace(&mut current, vec![a]),
                    allow_zero_segments: chain.allow_zero_segments,
                });
                used.clear();
            }
            used.push(k);
        }
        current.push(b);
    }
    runs.push(PolygonalChain {
        vertices: current,
        allow_zero_segments: chain.allow_zero_segments,
    });
    Ok(runs)
}

/// Simple lines joined end to end.
#[derive(Debug, Clone)]
pub struct PiecewiseSimpleLine {
    pub segments: Vec<SimpleLine3D>,
    pub closed: bool,
}

impl PiecewiseSimpleLine {
    pub fn new(segments: Vec<SimpleLine3D>, closed: bool) -> PiecewiseSimpleLine {
        PiecewiseSimpleLine { segments, closed }
    }

    /// Straight segments through the chain's vertices; zero-length segments are dropped.
    pub fn from_chain(chain: &PolygonalChain) -> Result<PiecewiseSimpleLine> {
        let v = chain.validate();
        if !v.is_empty() {
            return Err(Error::Geometry(v));
        }
        let segments = chain
            .vertices
            .windows(2)
            .filter(|w| w[0] != w[1])
            .map(|w| SimpleLine3D::segment(w[0], w[1]))
            .collect::<Result<Vec<_>>>()?;
        Ok(PiecewiseSimpleLine {
            segments,
            closed: chain.is_closed(),
        })
    }

    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.segments.is_empty() {
            out.push("a piecewise line needs at least one segment".into());
            return out;
        }
        for (i, s) in self.segments.iter().enumerate() {
            out.extend(s.validate().into_iter().map(|m| format!("segment {i}: {m}")));
        }
        let ends = |s: &SimpleLine3D| Ok::<_, Error>((s.start_point()?, s.end_point()?));
        let Ok(pts) = self.segments.iter().map(ends).collect::<Result<Vec<_>>>() else {
            out.push("segment end points are not evaluable".into());
            return out;
        };
        for i in 1..pts.len() {
            if !close(&pts[i - 1].1, &pts[i].0) {
                out.push(format!(
                    "segment {} ends at {:?} but segment {i} starts at {:?}",
                    i - 1,
                    pts[i - 1].1,
                    pts[i].0
                ));
            }
        }
        if self.closed && !close(&pts[pts.len() - 1].1, &pts[0].0) {
            out.push("closed line does not return to its start".into());
        }
        out
    }
}

/// One iterated description of a planar region: `outer` ranges over an
/// interval and `inner` lies between two functions of it.
#[derive(Debug, Clone, PartialEq)]
pub struct Description {
    pub outer_axis: usize,
    pub inner_axis: usize,
    pub outer: (f64, f64),
    /// Expressions in `Var(outer_axis)`.
    pub inner_lo: FieldExpr,
    pub inner_hi: FieldExpr,
}

impl Description {
    pub fn inner_limits(&self, u: f64) -> Result<(f64, f64)> {
        Ok((at(&self.inner_lo, self.outer_axis, u)?, at(&self.inner_hi, self.outer_axis, u)?))
    }

    fn has_constant_limits(&self) -> bool {
        self.inner_lo.is_constant() && self.inner_hi.is_constant()
    }
}

/// A region in a coordinate plane, simple with respect to its inner axis and
/// optionally described the other way round as well.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleRegion2D {
    pub main: Description,
    pub alt: Option<Description>,
}

impl SimpleRegion2D {
    pub fn new(main: Description, alt: Option<Description>) -> SimpleRegion2D {
        SimpleRegion2D { main, alt }
    }

    pub fn rectangle(u_axis: usize, v_axis: usize, u: (f64, f64), v: (f64, f64)) -> SimpleRegion2D {
        let d = |outer_axis, inner_axis, outer, inner: (f64, f64)| Description {
            outer_axis,
            inner_axis,
            outer,
            inner_lo: FieldExpr::num(inner.0),
            inner_hi: FieldExpr::num(inner.1),
        };
        SimpleRegion2D {
            main: d(u_axis, v_axis, u, v),
            alt: Some(d(v_axis, u_axis, v, u)),
        }
    }

    pub fn u_axis(&self) -> usize {
        self.main.outer_axis
    }

    pub fn v_axis(&self) -> usize {
        self.main.inner_axis
    }

    pub fn is_rectangle(&self) -> bool {
        self.main.has_constant_limits()
    }

    /// The same region with the roles of the axes exchanged.
    pub fn transposed(&self) -> Option<SimpleRegion2D> {
        Some(SimpleRegion2D {
            main: self.alt.clone()?,
            alt: Some(self.main.clone()),
        })
    }

    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let m = &self.main;
        if m.outer_axis == m.inner_axis || m.outer_axis > 2 || m.inner_axis > 2 {
            out.push(format!("axes ({}, {}) must be two distinct axes", m.outer_axis, m.inner_axis));
            return out;
        }
        let (a, b) = m.outer;
        if !(0.0 <= a && a <= b) {
            out.push(format!("outer range [{a}, {b}] must satisfy 0 <= a <= b"));
            return out;
        }
        for u in grid(a, b) {
            match m.inner_limits(u) {
                Ok((lo, hi)) if 0.0 <= lo && lo <= hi + ENDPOINT_TOL => {}
                Ok((lo, hi)) => {
                    out.push(format!("inner limits [{lo}, {hi}] at {u} violate 0 <= lo <= hi"));
                    break;
                }
                Err(e) => {
                    out.push(format!("inner limits at {u}: {e}"));
                    break;
                }
            }
        }
        let Some(alt) = &self.alt else { return out };
        if alt.outer_axis != m.inner_axis || alt.inner_axis != m.outer_axis {
            out.push("the second description must swap the axes".into());
            return out;
        }
        let n = 16;
        for i in 0..=n {
            let u = a + (b - a) * i as f64 / n as f64;
            let Ok((lo, hi)) = m.inner_limits(u) else { continue };
            for j in 1..n {
                let v = lo + (hi - lo) * j as f64 / n as f64;
                let inside = alt.outer.0 - 1e-9 <= v && v <= alt.outer.1 + 1e-9;
                let ok = inside
                    && match alt.inner_limits(v) {
                        Ok((l2, h2)) => l2 - 1e-9 <= u && u <= h2 + 1e-9,
                        Err(_) => false,
                    };
                if !ok {
                    out.push(format!("point ({u}, {v}) is inside the first description but not the second"));
                    return out;
                }
            }
        }
        out
    }

    /// Boundary traversed positively in the (outer, inner) plane, lifted to 3-D
    /// with the remaining coordinate given by `height`, an expression in the
    /// two plane variables.
    pub fn boundary(&self, height: &FieldExpr) -> Result<PiecewiseSimpleLine> {
        let m = &self.main;
        let (u, v) = (m.outer_axis, m.inner_axis);
        let w = 3 - u - v;
        let (a, b) = m.outer;
        let lift = |sub_u: FieldExpr, sub_v: FieldExpr| {
            let mut sub = [FieldExpr::var(0), FieldExpr::var(1), FieldExpr::var(2)];
            sub[u] = sub_u;
            sub[v] = sub_v;
            height.substitute(&sub)
        };
        let mut pieces = Vec::new();
        let along_u = |curve: &FieldExpr, from: f64, to: f64| {
            let mut c = [FieldExpr::num(0.0), FieldExpr::num(0.0), FieldExpr::num(0.0)];
            c[v] = curve.clone();
            c[w] = lift(FieldExpr::var(u), curve.clone());
            SimpleLine3D::new(u, c, from, to)
        };
        let along_v = |u_at: f64, from: f64, to: f64| {
            let mut c = [FieldExpr::num(0.0), FieldExpr::num(0.0), FieldExpr::num(0.0)];
            c[u] = FieldExpr::num(u_at);
            c[w] = lift(FieldExpr::num(u_at), FieldExpr::var(v));
            SimpleLine3D::new(v, c, from, to)
        };
        if a == b {
            return domain("region has empty interior");
        }
        let (lo_b, hi_b) = m.inner_limits(b)?;
        let (lo_a, hi_a) = m.inner_limits(a)?;
        pieces.push(along_u(&m.inner_lo, a, b));
        if hi_b > lo_b {
            pieces.push(along_v(b, lo_b, hi_b));
        }
        pieces.push(along_u(&m.inner_hi, b, a));
        if hi_a > lo_a {
            pieces.push(along_v(a, hi_a, lo_a));
        }
        Ok(PiecewiseSimpleLine::new(pieces, true))
    }
}

/// A graph patch `x_k = graph(other two)` over a planar region, with an
/// orientation sign relative to `e_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Patch {
    pub normal: usize,
    /// Expression in the two coordinates other than `normal`.
    pub graph: FieldExpr,
    pub region: SimpleRegion2D,
    pub sign: f64,
}

impl Patch {
    pub fn flat(normal: usize, level: f64, region: SimpleRegion2D, sign: f64) -> Patch {
        Patch {
            normal,
            graph: FieldExpr::num(level),
            region,
            sign,
        }
    }

    pub fn validate(&self) -> Vec<String> {
        let mut out: Vec<String> = self.region.validate();
        let (u, v) = (self.region.u_axis(), self.region.v_axis());
        if self.normal > 2 || u == self.normal || v == self.normal {
            out.push(format!("region axes ({u}, {v}) must differ from the normal axis {}", self.normal));
        }
        if self.graph.uses(self.normal) {
            out.push("graph must not depend on its own coordinate".into());
        }
        if self.sign.abs() != 1.0 {
            out.push(format!("orientation sign {} must be +1 or -1", self.sign));
        }
        out
    }

    /// Boundary oriented with the patch normal `sign * e_normal`.
    pub fn boundary(&self) -> Result<PiecewiseSimpleLine> {
        let b = self.region.boundary(&self.graph)?;
        let cyclic = self.region.u_axis() == (self.normal + 1) % 3;
        if cyclic == (self.sign > 0.0) {
            Ok(b)
        } else {
            Ok(PiecewiseSimpleLine::new(
                b.segments.iter().rev().map(SimpleLine3D::reversed).collect(),
                true,
            ))
        }
    }
}

/// A union of graph patches.
#[derive(Debug, Clone)]
pub struct PiecewiseSimpleSurface {
    pub patches: Vec<Patch>,
    /// Boundary curve; derived automatically for a single patch.
    pub boundary: Option<PiecewiseSimpleLine>,
}

impl PiecewiseSimpleSurface {
    pub fn new(patches: Vec<Patch>) -> PiecewiseSimpleSurface {
        PiecewiseSimpleSurface {
            patches,
            boundary: None,
        }
    }

    pub fn with_boundary(mut self, boundary: PiecewiseSimpleLine) -> PiecewiseSimpleSurface {
        self.boundary = Some(boundary);
        self
    }

    pub fn boundary(&self) -> Result<PiecewiseSimpleLine> {
        match (&self.boundary, self.patches.as_slice()) {
            (Some(b), _) => Ok(b.clone()),
            (None, [p]) => p.boundary(),
            _ => domain("the boundary of a multi-patch surface must be given explicitly"),
        }
    }

    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.patches.is_empty() {
            out.push("surface has no patches".into());
        }
        for (i, p) in self.patches.iter().enumerate() {
            out.extend(p.validate().into_iter().map(|m| format!("patch {i}: {m}")));
        }
        if let Some(b) = &self.boundary {
            out.extend(b.validate().into_iter().map(|m| format!("boundary: {m}")));
            if !b.closed {
                out.push("boundary must be closed".into());
            }
        }
        out
    }
}

/// An axis-aligned box `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Box3D {
    pub lo: Point,
    pub hi: Point,
}

impl Box3D {
    pub fn new(lo: Point, hi: Point) -> Box3D {
        Box3D { lo, hi }
    }

    pub fn unit() -> Box3D {
        Box3D::new([0.0; 3], [1.0; 3])
    }

    pub fn validate(&self) -> Vec<String> {
        (0..3)
            .filter(|&k| !(0.0 <= self.lo[k] && self.lo[k] <= self.hi[k]))
            .map(|k| {
                format!(
                    "{} bounds [{}, {}] must satisfy 0 <= lower <= upper",
                    AXIS_NAMES[k], self.lo[k], self.hi[k]
                )
            })
            .collect()
    }

    /// Cross-section perpendicular to `normal`, with cyclic axis order.
    pub fn face_region(&self, normal: usize) -> SimpleRegion2D {
        let (u, v) = ((normal + 1) % 3, (normal + 2) % 3);
        SimpleRegion2D::rectangle(u, v, (self.lo[u], self.hi[u]), (self.lo[v], self.hi[v]))
    }

    /// Outward-oriented faces; the face at the lower end of axis 2 is left out
    /// unless `bottom` is set.
    pub fn faces(&self, bottom: bool) -> Vec<Patch> {
        let mut out = Vec::new();
        for k in 0..3 {
            out.push(Patch::flat(k, self.hi[k], self.face_region(k), 1.0));
            if k != 2 || bottom {
                out.push(Patch::flat(k, self.lo[k], self.face_region(k), -1.0));
            }
        }
        out
    }

    /// The bottom rectangle A B C D, counterclockwise seen from above.
    pub fn bottom_loop(&self) -> Result<PiecewiseSimpleLine> {
        let (l, h) = (self.lo, self.hi);
        let z = l[2];
        PiecewiseSimpleLine::from_chain(&PolygonalChain::new(vec![
            [l[0], l[1], z],
            [h[0], l[1], z],
            [h[0], h[1], z],
            [l[0], h[1], z],
            [l[0], l[1], z],
        ]))
    }

    pub fn as_z_simple(&self) -> ZSimpleRegion3D {
        ZSimpleRegion3D {
            base: SimpleRegion2D::rectangle(0, 1, (self.lo[0], self.hi[0]), (self.lo[1], self.hi[1])),
            z_lo: FieldExpr::num(self.lo[2]),
            z_hi: FieldExpr::num(self.hi[2]),
        }
    }
}

/// `{ (x, y) in base, z_lo(x, y) <= z <= z_hi(x, y) }`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZSimpleRegion3D {
    /// Region in the (x, y) plane.
    pub base: SimpleRegion2D,
    pub z_lo: FieldExpr,
    pub z_hi: FieldExpr,
}

impl ZSimpleRegion3D {
    pub fn z_limits(&self, p: Point) -> Result<(f64, f64)> {
        Ok((self.z_lo.eval(&p)?, self.z_hi.eval(&p)?))
    }

    pub fn validate(&self) -> Vec<String> {
        let mut out = self.base.validate();
        if self.base.u_axis() == 2 || self.base.v_axis() == 2 {
            out.push("base region must lie in the (x, y) plane".into());
        }
        if self.z_lo.uses(2) || self.z_hi.uses(2) {
            out.push("z limits must depend on x and y only".into());
        }
        if !out.is_empty() {
            return out;
        }
        let m = &self.base.main;
        let n = 16;
        for i in 0..=n {
            let u = m.outer.0 + (m.outer.1 - m.outer.0) * i as f64 / n as f64;
            let Ok((lo, hi)) = m.inner_limits(u) else { continue };
            for j in 0..=n {
                let mut p = [0.0; 3];
                p[m.outer_axis] = u;
                p[m.inner_axis] = lo + (hi - lo) * j as f64 / n as f64;
                match self.z_limits(p) {
                    Ok((a, b)) if 0.0 <= a && a <= b => {}
                    Ok((a, b)) => {
                        out.push(format!("z limits [{a}, {b}] at {p:?} violate 0 <= lo <= hi"));
                        return out;
                    }
                    Err(e) => {
                        out.push(format!("z limits at {p:?}: {e}"));
                        return out;
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_examples() {
        let x = FieldExpr::var(0);
        let sq = FieldExpr::pow(x.clone(), FieldExpr::num(2.0));
        assert!((invert_monotone(&sq, 0, 1.0, 2.0).unwrap().eval(2.25).unwrap() - 1.5).abs() < 1e-12);
        assert!((invert_monotone(&x, 0, 0.0, 1.0).unwrap().eval(0.3).unwrap() - 0.3).abs() < 1e-12);
        let aff = FieldExpr::add(FieldExpr::mul(FieldExpr::num(2.0), x), FieldExpr::num(1.0));
        assert!((invert_monotone(&aff, 0, 0.0, 1.0).unwrap().eval(2.0).unwrap() - 0.5).abs() < 1e-12);
        // outside the construction interval
        assert!((invert_monotone(&sq, 0, 1.0, 2.0).unwrap().eval(0.25).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn non_monotone_inverse_is_refused() {
        let f = fieldlang::parse("(x - 0.5)^2").unwrap();
        assert!(invert_monotone(&f, 0, 0.0, 1.0).is_err());
    }
}
