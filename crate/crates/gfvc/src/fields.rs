//! Scalar fields on the positive octant as composable objects.
//!
//! A [`Field`] evaluates at points, restricts to coordinate rays as a
//! [`Profile`], and has classical partial derivatives. Expression fields are
//! symbolic; axis-wise GFD fields and their combinations are evaluated by
//! quadrature, which lets operators nest (Curl of Grad, Div of Curl, ...).

use crate::error::{domain, Result};
use crate::geometry::Point;
use crate::gfc1d::{gfd_profile, Const, ConvProfile, ExprProfile, Product, Profile, ProfileRef, Sum, MAX_CLAIM};
use crate::kernels::{KernelPair, Side};
use crate::quad::QuadSpec;
use fieldlang::FieldExpr;
use std::fmt;
use std::sync::{Arc, OnceLock};

pub type FieldRef = Arc<dyn Field>;
pub type VecField = [FieldRef; 3];

pub trait Field: Send + Sync + fmt::Debug {
    fn value(&self, p: Point) -> Result<f64>;

    /// Value with an absolute error estimate.
    fn value_est(&self, p: Point) -> Result<(f64, f64)> {
        Ok((self.value(p)?, 0.0))
    }

    /// Restriction t -> f(base with coordinate `axis` = t).
    fn along(self: Arc<Self>, axis: usize, base: Point) -> Result<ProfileRef>;

    /// Classical partial derivative.
    fn partial(self: Arc<Self>, axis: usize) -> Result<FieldRef>;

    /// Claimed leading exponent of the restriction along `axis` through `base`.
    fn exponent(&self, axis: usize, base: Point) -> f64;

    fn expr(&self) -> Option<&FieldExpr> {
        None
    }

    fn is_zero(&self) -> bool {
        false
    }

    /// False only when the field is known to be constant along `axis`.
    fn depends_on(&self, _axis: usize) -> bool {
        true
    }
}

fn with(base: Point, axis: usize, t: f64) -> Point {
    let mut p = base;
    p[axis] = t;
    p
}

/// Generic restriction of a field to a coordinate ray.
#[derive(Debug)]
pub struct RayProfile {
    field: FieldRef,
    axis: usize,
    base: Point,
    claim: f64,
}

impl RayProfile {
    /// Fields constant along `axis` become a constant profile evaluated once.
    pub fn new(field: FieldRef, axis: usize, base: Point) -> ProfileRef {
        if !field.depends_on(axis) {
            return Arc::new(Frozen {
                field,
                base,
                value: OnceLock::new(),
            });
        }
        let claim = field.exponent(axis, base).min(MAX_CLAIM);
        Arc::new(RayProfile {
            field,
            axis,
            base,
            claim,
        })
    }
}

impl Profile for RayProfile {
    fn value(&self, t: f64) -> Result<f64> {
        self.field.value(with(self.base, self.axis, t))
    }

    fn value_est(&self, t: f64) -> Result<(f64, f64)> {
        self.field.value_est(with(self.base, self.axis, t))
    }

    fn exponent(&self) -> f64 {
        self.claim
    }

    fn derivative(&self) -> Result<ProfileRef> {
        self.field.clone().partial(self.axis)?.along(self.axis, self.base)
    }

    fn is_zero(&self) -> bool {
        self.field.is_zero()
    }
}

/// A field restricted to a ray it does not vary along.
#[derive(Debug)]
struct Frozen {
    field: FieldRef,
    base: Point,
    value: OnceLock<Result<(f64, f64)>>,
}

impl Profile for Frozen {
    fn value(&self, t: f64) -> Result<f64> {
        Ok(self.value_est(t)?.0)
    }

    fn value_est(&self, _t: f64) -> Result<(f64, f64)> {
        self.value.get_or_init(|| self.field.value_est(self.base)).clone()
    }

    fn exponent(&self) -> f64 {
        0.0
    }

    fn derivative(&self) -> Result<ProfileRef> {
        Ok(Arc::new(Const(0.0)))
    }

    fn is_zero(&self) -> bool {
        self.field.is_zero()
    }
}

/// A field-language expression in (x, y, z).
#[derive(Debug, Clone)]
pub struct ExprField {
    expr: FieldExpr,
}

impl ExprField {
    pub fn new(expr: FieldExpr) -> FieldRef {
        Arc::new(ExprField { expr })
    }

    pub fn constant(c: f64) -> FieldRef {
        ExprField::new(FieldExpr::num(c))
    }

    pub fn parse(text: &str) -> Result<FieldRef> {
        let e = fieldlang::parse(text).map_err(|e| crate::Error::Domain(e.to_string()))?;
        Ok(ExprField::new(e))
    }
}

/// Vector field from three expressions.
pub fn expr_vec(comps: &[FieldExpr; 3]) -> VecField {
    std::array::from_fn(|k| ExprField::new(comps[k].clone()))
}

/// Parse three component expressions in x, y, z.
pub fn parse_vec(texts: [&str; 3]) -> Result<VecField> {
    let [a, b, c] = texts;
    Ok([ExprField::parse(a)?, ExprField::parse(b)?, ExprField::parse(c)?])
}

impl Field for ExprField {
    fn value(&self, p: Point) -> Result<f64> {
        Ok(self.expr.eval(&p)?)
    }

    fn along(self: Arc<Self>, axis: usize, base: Point) -> Result<ProfileRef> {
        Ok(Arc::new(ExprProfile::new(&self.expr, axis, base)))
    }

    fn partial(self: Arc<Self>, axis: usize) -> Result<FieldRef> {
        Ok(ExprField::new(self.expr.diff(axis)))
    }

    fn exponent(&self, axis: usize, base: Point) -> f64 {
        ExprProfile::new(&self.expr, axis, base).exponent()
    }

    fn expr(&self) -> Option<&FieldExpr> {
        Some(&self.expr)
    }

    fn is_zero(&self) -> bool {
        matches!(self.expr, FieldExpr::Num(c) if c == 0.0)
    }

    fn depends_on(&self, axis: usize) -> bool {
        self.expr.uses(axis)
    }
}

/// Caputo-type GFD of `inner` along one axis, other coordinates frozen.
#[derive(Debug)]
pub struct AxisGfd {
    pair: KernelPair,
    inner: FieldRef,
    axis: usize,
    spec: QuadSpec,
}

/// D^{axis,*} inner; the classical partial for Classical pairs.
pub fn axis_gfd(pair: &KernelPair, inner: &FieldRef, axis: usize, spec: &QuadSpec) -> Result<FieldRef> {
    if inner.is_zero() {
        return Ok(ExprField::constant(0.0));
    }
    if pair.is_classical() {
        return inner.clone().partial(axis);
    }
    if let Some(e) = inner.expr() {
        if !e.uses(axis) {
            return Ok(ExprField::constant(0.0));
        }
    }
    Ok(Arc::new(AxisGfd {
        pair: pair.clone(),
        inner: inner.clone(),
        axis,
        spec: *spec,
    }))
}

impl AxisGfd {
    fn own_profile(&self, base: Point) -> Result<ProfileRef> {
        gfd_profile(&self.pair, self.inner.clone().along(self.axis, base)?, &self.spec)
    }
}

impl Field for AxisGfd {
    fn value(&self, p: Point) -> Result<f64> {
        Ok(self.value_est(p)?.0)
    }

    fn value_est(&self, p: Point) -> Result<(f64, f64)> {
        self.own_profile(p)?.value_est(p[self.axis])
    }

    fn along(self: Arc<Self>, axis: usize, base: Point) -> Result<ProfileRef> {
        if axis == self.axis {
            self.own_profile(base)
        } else {
            Ok(RayProfile::new(self, axis, base))
        }
    }

    fn partial(self: Arc<Self>, axis: usize) -> Result<FieldRef> {
        if axis == self.axis {
            Ok(Arc::new(AlongSlope { field: self, axis }))
        } else {
            axis_gfd(&self.pair, &self.inner.clone().partial(axis)?, self.axis, &self.spec)
        }
    }

    fn exponent(&self, axis: usize, base: Point) -> f64 {
        if axis == self.axis {
            self.own_profile(base).map(|p| p.exponent()).unwrap_or(0.0)
        } else {
            self.inner.exponent(axis, base)
        }
    }

    fn depends_on(&self, axis: usize) -> bool {
        self.inner.depends_on(axis)
    }
}

/// K * inner along one axis, other coordinates frozen; inner itself for
/// Classical pairs.
#[derive(Debug)]
pub struct AxisConv {
    pair: KernelPair,
    inner: FieldRef,
    axis: usize,
    spec: QuadSpec,
}

pub fn axis_conv(pair: &KernelPair, inner: &FieldRef, axis: usize, spec: &QuadSpec) -> FieldRef {
    if inner.is_zero() {
        return ExprField::constant(0.0);
    }
    if pair.is_classical() {
        return inner.clone();
    }
    Arc::new(AxisConv {
        pair: pair.clone(),
        inner: inner.clone(),
        axis,
        spec: *spec,
    })
}

impl AxisConv {
    fn own_profile(&self, base: Point) -> Result<ProfileRef> {
        ConvProfile::new(&self.pair, Side::K, self.inner.clone().along(self.axis, base)?, &self.spec)
    }
}

impl Field for AxisConv {
    fn value(&self, p: Point) -> Result<f64> {
        Ok(self.value_est(p)?.0)
    }

    fn value_est(&self, p: Point) -> Result<(f64, f64)> {
        self.own_profile(p)?.value_est(p[self.axis])
    }

    fn along(self: Arc<Self>, axis: usize, base: Point) -> Result<ProfileRef> {
        if axis == self.axis {
            self.own_profile(base)
        } else {
            Ok(RayProfile::new(self, axis, base))
        }
    }

    fn partial(self: Arc<Self>, axis: usize) -> Result<FieldRef> {
        if axis == self.axis {
            Ok(Arc::new(AlongSlope { field: self, axis }))
        } else {
            Ok(axis_conv(&self.pair, &self.inner.clone().partial(axis)?, self.axis, &self.spec))
        }
    }

    fn exponent(&self, axis: usize, base: Point) -> f64 {
        if axis == self.axis {
            self.own_profile(base).map(|p| p.exponent()).unwrap_or(0.0)
        } else {
            self.inner.exponent(axis, base)
        }
    }

    fn depends_on(&self, axis: usize) -> bool {
        axis == self.axis || self.inner.depends_on(axis)
    }
}

/// Partial derivative along `axis` taken from the restriction's derivative.
#[derive(Debug)]
pub struct AlongSlope {
    field: FieldRef,
    axis: usize,
}

impl Field for AlongSlope {
    fn value(&self, p: Point) -> Result<f64> {
        Ok(self.value_est(p)?.0)
    }

    fn value_est(&self, p: Point) -> Result<(f64, f64)> {
        self.field
            .clone()
            .along(self.axis, p)?
            .derivative()?
            .value_est(p[self.axis])
    }

    fn along(self: Arc<Self>, axis: usize, base: Point) -> Result<ProfileRef> {
        if axis == self.axis {
            self.field.clone().along(axis, base)?.derivative()
        } else {
            Ok(RayProfile::new(self, axis, base))
        }
    }

    fn partial(self: Arc<Self>, axis: usize) -> Result<FieldRef> {
        if axis == self.axis {
            Ok(Arc::new(AlongSlope { field: self, axis }))
        } else {
            let inner = self.field.clone().partial(axis)?;
            if inner.is_zero() {
                return Ok(ExprField::constant(0.0));
            }
            Ok(Arc::new(AlongSlope {
                field: inner,
                axis: self.axis,
            }))
        }
    }

    fn exponent(&self, axis: usize, base: Point) -> f64 {
        if axis == self.axis {
            self.field
                .clone()
                .along(axis, base)
                .and_then(|f| f.derivative())
                .map(|d| d.exponent())
                .unwrap_or(0.0)
        } else {
            self.field.exponent(axis, base)
        }
    }

    fn depends_on(&self, axis: usize) -> bool {
        self.field.depends_on(axis)
    }
}

/// Sum of scaled fields.
#[derive(Debug)]
pub struct Linear {
    terms: Vec<(f64, FieldRef)>,
}

/// Linear combination with zero terms dropped.
pub fn linear(terms: Vec<(f64, FieldRef)>) -> FieldRef {
    let terms: Vec<(f64, FieldRef)> = terms
        .into_iter()
        .filter(|(c, f)| *c != 0.0 && !f.is_zero())
        .collect();
    match terms.as_slice() {
        [] => ExprField::constant(0.0),
        [(c, f)] if *c == 1.0 => f.clone(),
        _ => Arc::new(Linear { terms }),
    }
}

impl Field for Linear {
    fn value(&self, p: Point) -> Result<f64> {
        Ok(self.value_est(p)?.0)
    }

    fn value_est(&self, p: Point) -> Result<(f64, f64)> {
        let (mut v, mut e) = (0.0, 0.0);
        for (c, f) in &self.terms {
            let (fv, fe) = f.value_est(p)?;
            v += c * fv;
            e += c.abs() * fe;
        }
        Ok((v, e))
    }

    fn along(self: Arc<Self>, axis: usize, base: Point) -> Result<ProfileRef> {
        let terms = self
            .terms
            .iter()
            .map(|(c, f)| Ok((*c, f.clone().along(axis, base)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Sum::new(terms))
    }

    fn partial(self: Arc<Self>, axis: usize) -> Result<FieldRef> {
        let terms = self
            .terms
            .iter()
            .map(|(c, f)| Ok((*c, f.clone().partial(axis)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(linear(terms))
    }

    fn exponent(&self, axis: usize, base: Point) -> f64 {
        self.terms
            .iter()
            .map(|(_, f)| f.exponent(axis, base))
            .fold(MAX_CLAIM, f64::min)
    }

    fn depends_on(&self, axis: usize) -> bool {
        self.terms.iter().any(|(_, f)| f.depends_on(axis))
    }
}

/// Pointwise product of two fields.
#[derive(Debug)]
pub struct ProductField {
    a: FieldRef,
    b: FieldRef,
}

/// a * b, multiplying symbolically when both are expressions.
pub fn product(a: &FieldRef, b: &FieldRef) -> FieldRef {
    if a.is_zero() || b.is_zero() {
        return ExprField::constant(0.0);
    }
    match (a.expr(), b.expr()) {
        (Some(x), Some(y)) => ExprField::new(FieldExpr::mul(x.clone(), y.clone())),
        (Some(FieldExpr::Num(c)), None) if *c == 1.0 => b.clone(),
        (None, Some(FieldExpr::Num(c))) if *c == 1.0 => a.clone(),
        _ => Arc::new(ProductField {
            a: a.clone(),
            b: b.clone(),
        }),
    }
}

impl Field for ProductField {
    fn value(&self, p: Point) -> Result<f64> {
        Ok(self.value_est(p)?.0)
    }

    fn value_est(&self, p: Point) -> Result<(f64, f64)> {
        let (av, ae) = self.a.value_est(p)?;
        let (bv, be) = self.b.value_est(p)?;
        Ok((av * bv, ae * bv.abs() + av.abs() * be))
    }

    fn along(self: Arc<Self>, axis: usize, base: Point) -> Result<ProfileRef> {
        Ok(Product::new(
            self.a.clone().along(axis, base)?,
            self.b.clone().along(axis, base)?,
        ))
    }

    fn partial(self: Arc<Self>, axis: usize) -> Result<FieldRef> {
        let da = self.a.clone().partial(axis)?;
        let db = self.b.clone().partial(axis)?;
        Ok(linear(vec![(1.0, product(&da, &self.b)), (1.0, product(&self.a, &db))]))
    }

    fn exponent(&self, axis: usize, base: Point) -> f64 {
        (self.a.exponent(axis, base) + self.b.exponent(axis, base)).min(MAX_CLAIM)
    }

    fn depends_on(&self, axis: usize) -> bool {
        self.a.depends_on(axis) || self.b.depends_on(axis)
    }
}

/// The field with coordinate `axis` replaced by `graph(p)`: its values on a
/// graph surface, as a function of the remaining coordinates.
#[derive(Debug)]
pub struct OnGraph {
    field: FieldRef,
    axis: usize,
    graph: FieldExpr,
}

pub fn on_graph(field: &FieldRef, axis: usize, graph: &FieldExpr) -> FieldRef {
    if let Some(e) = field.expr() {
        let mut sub = [FieldExpr::var(0), FieldExpr::var(1), FieldExpr::var(2)];
        sub[axis] = graph.clone();
        return ExprField::new(e.substitute(&sub));
    }
    Arc::new(OnGraph {
        field: field.clone(),
        axis,
        graph: graph.clone(),
    })
}

impl OnGraph {
    fn lift(&self, p: Point) -> Result<Point> {
        Ok(with(p, self.axis, self.graph.eval(&p)?))
    }
}

impl Field for OnGraph {
    fn value(&self, p: Point) -> Result<f64> {
        self.field.value(self.lift(p)?)
    }

    fn value_est(&self, p: Point) -> Result<(f64, f64)> {
        self.field.value_est(self.lift(p)?)
    }

    fn along(self: Arc<Self>, axis: usize, base: Point) -> Result<ProfileRef> {
        if axis == self.axis {
            return Ok(Arc::new(Const(self.value(base)?)));
        }
        if let FieldExpr::Num(level) = self.graph {
            return self.field.clone().along(axis, with(base, self.axis, level));
        }
        Ok(RayProfile::new(self, axis, base))
    }

    fn partial(self: Arc<Self>, axis: usize) -> Result<FieldRef> {
        if let FieldExpr::Num(_) = self.graph {
            if axis == self.axis {
                return Ok(ExprField::constant(0.0));
            }
            return Ok(on_graph(&self.field.clone().partial(axis)?, self.axis, &self.graph));
        }
        domain("partial derivative of a non-expression field restricted to a curved graph")
    }

    fn exponent(&self, axis: usize, base: Point) -> f64 {
        if axis == self.axis {
            return 0.0;
        }
        match self.lift(base) {
            Ok(p) if !self.graph.uses(axis) => self.field.exponent(axis, p),
            _ => 0.0,
        }
    }

    fn is_zero(&self) -> bool {
        self.field.is_zero()
    }

    fn depends_on(&self, axis: usize) -> bool {
        axis != self.axis
            && (self.field.depends_on(axis) || (self.graph.uses(axis) && self.field.depends_on(self.axis)))
    }
}
