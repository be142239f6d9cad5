//! One-dimensional general fractional integrals and derivatives.
//!
//! Functions on (0, inf) are [`Profile`]s: evaluable, with a claimed leading
//! exponent at 0 and a derivative. Operators build new profiles, so nested
//! compositions such as D*(I g) are profiles of profiles.

use crate::error::{domain, Error, Result};
use crate::kernels::{KernelFamily, KernelPair, Side};
use crate::quad::{convolve_operand, Operand, PowerKernel, QuadResult, QuadSpec};
use fieldlang::{leading_exponent, FieldExpr, Leading};
use std::fmt;
use std::sync::{Arc, OnceLock};

/// Largest exponent claimed for quadrature weights; higher powers are smooth enough.
pub const MAX_CLAIM: f64 = 8.0;

/// Exponents within this distance of -1 are treated as a cancelled leading term.
const DEGENERATE_GAP: f64 = 1e-9;

pub type ProfileRef = Arc<dyn Profile>;

/// A function of one variable on (0, inf) with C_{-1}-type structure at 0.
pub trait Profile: Send + Sync + fmt::Debug {
    fn value(&self, t: f64) -> Result<f64>;

    /// Value with an absolute error estimate.
    fn value_est(&self, t: f64) -> Result<(f64, f64)> {
        Ok((self.value(t)?, 0.0))
    }

    /// Claimed q with f(t) ~ t^q as t -> 0+.
    fn exponent(&self) -> f64;

    fn derivative(&self) -> Result<ProfileRef>;

    /// Power sigma such that t^-q f(t) is a smooth function of t^sigma near 0.
    fn smoothness(&self) -> f64 {
        1.0
    }

    fn is_zero(&self) -> bool {
        false
    }

    /// True when values involve finite-difference approximations.
    fn is_approximate(&self) -> bool {
        false
    }
}

pub(crate) fn claim_of(leading: Leading, what: &dyn fmt::Display) -> f64 {
    match leading {
        Leading::Zero => 0.0,
        Leading::Power(p) => p.min(MAX_CLAIM),
        Leading::Unknown => {
            log::warn!("could not infer the leading exponent of `{what}`; assuming 0");
            0.0
        }
    }
}

/// A field-language expression restricted to one variable.
pub struct ExprProfile {
    expr: FieldExpr,
    var: usize,
    base: [f64; 3],
    claim: f64,
    zero: bool,
    deriv: OnceLock<ProfileRef>,
}

impl fmt::Debug for ExprProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExprProfile({}, var {})", self.expr, self.var)
    }
}

impl ExprProfile {
    /// Restrict `expr` to variable `var`, holding the others at `base`.
    pub fn new(expr: &FieldExpr, var: usize, base: [f64; 3]) -> ExprProfile {
        let mut sub = [FieldExpr::Var(0), FieldExpr::Var(1), FieldExpr::Var(2)];
        for (i, s) in sub.iter_mut().enumerate() {
            if i != var {
                *s = FieldExpr::num(base[i]);
            }
        }
        let expr = expr.substitute(&sub);
        let leading = leading_exponent(&expr, var);
        let zero = leading == Leading::Zero;
        let claim = claim_of(leading, &expr);
        ExprProfile {
            expr,
            var,
            base,
            claim,
            zero,
            deriv: OnceLock::new(),
        }
    }

    /// Parse an expression in `x`.
    pub fn parse(text: &str) -> Result<ProfileRef> {
        let e = fieldlang::parse(text).map_err(|e| Error::Domain(e.to_string()))?;
        Ok(Arc::new(ExprProfile::new(&e, 0, [0.0; 3])))
    }

    pub fn expr(&self) -> &FieldExpr {
        &self.expr
    }
}

impl Profile for ExprProfile {
    fn value(&self, t: f64) -> Result<f64> {
        if self.zero {
            return Ok(0.0);
        }
        let mut p = self.base;
        p[self.var] = t;
        Ok(self.expr.eval(&p)?)
    }

    fn exponent(&self) -> f64 {
        self.claim
    }

    fn derivative(&self) -> Result<ProfileRef> {
        Ok(self
            .deriv
            .get_or_init(|| Arc::new(ExprProfile::new(&self.expr.diff(self.var), self.var, self.base)))
            .clone())
    }

    fn is_zero(&self) -> bool {
        self.zero
    }
}

type Func1 = Arc<dyn Fn(f64) -> Result<f64> + Send + Sync>;

/// An opaque function with an optional user-supplied derivative.
///
/// Without a derivative, a central finite difference with one Richardson step
/// is used and the profile is flagged approximate.
#[derive(Clone)]
pub struct FnProfile {
    f: Func1,
    claim: f64,
    df: Option<ProfileRef>,
}

impl fmt::Debug for FnProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FnProfile(claim {})", self.claim)
    }
}

impl FnProfile {
    pub fn new(f: impl Fn(f64) -> Result<f64> + Send + Sync + 'static, claim: f64) -> FnProfile {
        FnProfile {
            f: Arc::new(f),
            claim,
            df: None,
        }
    }

    pub fn with_derivative(mut self, df: ProfileRef) -> FnProfile {
        self.df = Some(df);
        self
    }
}

impl Profile for FnProfile {
    fn value(&self, t: f64) -> Result<f64> {
        (self.f)(t)
    }

    fn exponent(&self) -> f64 {
        self.claim
    }

    fn derivative(&self) -> Result<ProfileRef> {
        match &self.df {
            Some(d) => Ok(d.clone()),
            None => Ok(Arc::new(FdProfile {
                inner: Arc::new(self.clone()),
            })),
        }
    }
}

/// Finite-difference derivative: central, h = 1e-5, one Richardson step.
#[derive(Debug)]
pub struct FdProfile {
    inner: ProfileRef,
}

impl FdProfile {
    pub fn new(inner: ProfileRef) -> FdProfile {
        FdProfile { inner }
    }
}

pub(crate) fn central_difference(f: &dyn Fn(f64) -> Result<f64>, t: f64) -> Result<f64> {
    let h = 1e-5f64.min(t / 4.0);
    if !(h > 0.0) {
        return domain(format!("finite difference at t = {t}"));
    }
    let d = |h: f64| -> Result<f64> { Ok((f(t + h)? - f(t - h)?) / (2.0 * h)) };
    let (d1, d2) = (d(h)?, d(h / 2.0)?);
    Ok((4.0 * d2 - d1) / 3.0)
}

impl Profile for FdProfile {
    fn value(&self, t: f64) -> Result<f64> {
        central_difference(&|s| self.inner.value(s), t)
    }

    fn exponent(&self) -> f64 {
        let q = self.inner.exponent();
        if q == 0.0 {
            0.0
        } else {
            q - 1.0
        }
    }

    fn derivative(&self) -> Result<ProfileRef> {
        Ok(Arc::new(FdProfile {
            inner: Arc::new(FdProfile {
                inner: self.inner.clone(),
            }),
        }))
    }

    fn smoothness(&self) -> f64 {
        self.inner.smoothness()
    }

    fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    fn is_approximate(&self) -> bool {
        true
    }
}

/// A constant function.
#[derive(Debug, Clone, Copy)]
pub struct Const(pub f64);

impl Profile for Const {
    fn value(&self, _t: f64) -> Result<f64> {
        Ok(self.0)
    }

    fn exponent(&self) -> f64 {
        0.0
    }

    fn derivative(&self) -> Result<ProfileRef> {
        Ok(Arc::new(Const(0.0)))
    }

    fn is_zero(&self) -> bool {
        self.0 == 0.0
    }
}

/// Linear combination of profiles.
#[derive(Debug)]
pub struct Sum {
    terms: Vec<(f64, ProfileRef)>,
}

impl Sum {
    pub fn new(terms: Vec<(f64, ProfileRef)>) -> ProfileRef {
        let terms: Vec<_> = terms
            .into_iter()
            .filter(|(c, p)| *c != 0.0 && !p.is_zero())
            .collect();
        match terms.len() {
            0 => Arc::new(Const(0.0)),
            1 if terms[0].0 == 1.0 => terms[0].1.clone(),
            _ => Arc::new(Sum { terms }),
        }
    }
}

impl Profile for Sum {
    fn value(&self, t: f64) -> Result<f64> {
        Ok(self.value_est(t)?.0)
    }

    fn value_est(&self, t: f64) -> Result<(f64, f64)> {
        let mut v = 0.0;
        let mut e = 0.0;
        for (c, p) in &self.terms {
            let (pv, pe) = p.value_est(t)?;
            v += c * pv;
            e += c.abs() * pe;
        }
        Ok((v, e))
    }

    fn exponent(&self) -> f64 {
        self.terms
            .iter()
            .map(|(_, p)| p.exponent())
            .fold(MAX_CLAIM, f64::min)
    }

    fn derivative(&self) -> Result<ProfileRef> {
        let mut d = Vec::with_capacity(self.terms.len());
        for (c, p) in &self.terms {
            d.push((*c, p.derivative()?));
        }
        Ok(Sum::new(d))
    }

    fn smoothness(&self) -> f64 {
        self.terms.iter().map(|(_, p)| p.smoothness()).fold(1.0, f64::min)
    }

    fn is_approximate(&self) -> bool {
        self.terms.iter().any(|(_, p)| p.is_approximate())
    }
}

/// Pointwise product of two profiles.
#[derive(Debug)]
pub struct Product {
    a: ProfileRef,
    b: ProfileRef,
}

impl Product {
    pub fn new(a: ProfileRef, b: ProfileRef) -> ProfileRef {
        if a.is_zero() || b.is_zero() {
            return Arc::new(Const(0.0));
        }
        Arc::new(Product { a, b })
    }
}

impl Profile for Product {
    fn value(&self, t: f64) -> Result<f64> {
        Ok(self.a.value(t)? * self.b.value(t)?)
    }

    fn exponent(&self) -> f64 {
        (self.a.exponent() + self.b.exponent()).min(MAX_CLAIM)
    }

    fn derivative(&self) -> Result<ProfileRef> {
        Ok(Sum::new(vec![
            (1.0, Product::new(self.a.derivative()?, self.b.clone())),
            (1.0, Product::new(self.a.clone(), self.b.derivative()?)),
        ]))
    }

    fn smoothness(&self) -> f64 {
        self.a.smoothness().min(self.b.smoothness())
    }

    fn is_approximate(&self) -> bool {
        self.a.is_approximate() || self.b.is_approximate()
    }
}

/// t f(t).
#[derive(Debug)]
pub struct TimesT(pub ProfileRef);

impl Profile for TimesT {
    fn value(&self, t: f64) -> Result<f64> {
        Ok(t * self.0.value(t)?)
    }

    fn exponent(&self) -> f64 {
        (self.0.exponent() + 1.0).min(MAX_CLAIM)
    }

    fn derivative(&self) -> Result<ProfileRef> {
        Ok(Sum::new(vec![
            (1.0, self.0.clone()),
            (1.0, Arc::new(TimesT(self.0.derivative()?))),
        ]))
    }

    fn smoothness(&self) -> f64 {
        self.0.smoothness()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn is_approximate(&self) -> bool {
        self.0.is_approximate()
    }
}

/// One side of a kernel pair as a profile.
#[derive(Debug)]
pub struct KernelProfile {
    pair: KernelPair,
    side: Side,
}

impl KernelProfile {
    pub fn new(pair: &KernelPair, side: Side) -> Result<ProfileRef> {
        pair.exponent(side)?;
        Ok(Arc::new(KernelProfile {
            pair: pair.clone(),
            side,
        }))
    }
}

impl Profile for KernelProfile {
    fn value(&self, t: f64) -> Result<f64> {
        self.pair.eval(self.side, t)
    }

    fn exponent(&self) -> f64 {
        self.pair.exponent(self.side).unwrap_or(0.0)
    }

    fn derivative(&self) -> Result<ProfileRef> {
        let pair = self.pair.clone();
        let side = self.side;
        let p = pair.exponent(side)?;
        Ok(Arc::new(FnProfile::new(
            move |t| Ok(t.powf(p - 1.0) * pair.scaled_slope(side, t)?),
            p - 1.0,
        )))
    }

    fn smoothness(&self) -> f64 {
        self.pair.smoothness(self.side)
    }
}

fn kernel_conv(pair: &KernelPair, side: Side, f: &dyn Profile, x: f64, spec: &QuadSpec) -> Result<QuadResult> {
    conv_with(pair, side, &|u| pair.regular(side, u), f, x, spec)
}

fn conv_with(
    pair: &KernelPair,
    side: Side,
    regular: &dyn Fn(f64) -> Result<f64>,
    f: &dyn Profile,
    x: f64,
    spec: &QuadSpec,
) -> Result<QuadResult> {
    if f.is_zero() {
        return Ok(QuadResult {
            value: 0.0,
            est_error: 0.0,
            panels: 0,
        });
    }
    let q = f.exponent();
    if !(q > -1.0) {
        return domain(format!(
            "function with leading exponent {q} is not integrable at 0"
        ));
    }
    let kernel = PowerKernel {
        exponent: pair.exponent(side)?,
        smoothness: pair.smoothness(side),
        regular,
    };
    let eval = |t: f64| f.value_est(t);
    let operand = Operand {
        exponent: q,
        smoothness: f.smoothness(),
        eval: &eval,
    };
    convolve_operand(&kernel, &operand, x, spec)
}

/// x -> (kernel * inner)(x) for one side of a pair.
#[derive(Debug)]
pub struct ConvProfile {
    pair: KernelPair,
    side: Side,
    inner: ProfileRef,
    spec: QuadSpec,
}

impl ConvProfile {
    pub fn new(pair: &KernelPair, side: Side, inner: ProfileRef, spec: &QuadSpec) -> Result<ProfileRef> {
        pair.exponent(side)?;
        if inner.is_zero() {
            return Ok(Arc::new(Const(0.0)));
        }
        Ok(Arc::new(ConvProfile {
            pair: pair.clone(),
            side,
            inner,
            spec: *spec,
        }))
    }

    fn p(&self) -> f64 {
        self.pair.exponent(self.side).unwrap_or(0.0)
    }
}

impl Profile for ConvProfile {
    fn value(&self, t: f64) -> Result<f64> {
        Ok(self.value_est(t)?.0)
    }

    fn value_est(&self, t: f64) -> Result<(f64, f64)> {
        if t == 0.0 && self.exponent() > 0.0 {
            return Ok((0.0, 0.0));
        }
        let r = kernel_conv(&self.pair, self.side, &*self.inner, t, &self.spec)?;
        Ok((r.value, r.est_error))
    }

    fn exponent(&self) -> f64 {
        (1.0 + self.p() + self.inner.exponent()).min(MAX_CLAIM)
    }

    fn derivative(&self) -> Result<ProfileRef> {
        if self.pair.is_classical() && self.side == Side::M {
            return Ok(self.inner.clone());
        }
        let p = self.p();
        let q = self.inner.exponent();
        let gap = 1.0 + p + q;
        let claim = if gap.abs() < DEGENERATE_GAP {
            0.0
        } else if gap < 0.0 {
            return domain(format!(
                "derivative of a convolution with exponent {} is not integrable",
                p + q
            ));
        } else {
            p + q
        };
        Ok(Arc::new(SlopeProfile {
            pair: self.pair.clone(),
            side: self.side,
            inner: self.inner.clone(),
            inner_times_deriv: Arc::new(TimesT(self.inner.derivative()?)),
            claim,
            spec: self.spec,
        }))
    }

    fn smoothness(&self) -> f64 {
        self.pair.smoothness(self.side).min(self.inner.smoothness())
    }

    fn is_approximate(&self) -> bool {
        self.inner.is_approximate()
    }
}

/// d/dx (kernel * phi)(x) = [ (k*phi) + ((u k')*phi) + (k*(t phi')) ](x) / x.
#[derive(Debug)]
pub struct SlopeProfile {
    pair: KernelPair,
    side: Side,
    inner: ProfileRef,
    inner_times_deriv: ProfileRef,
    claim: f64,
    spec: QuadSpec,
}

impl Profile for SlopeProfile {
    fn value(&self, t: f64) -> Result<f64> {
        Ok(self.value_est(t)?.0)
    }

    fn value_est(&self, t: f64) -> Result<(f64, f64)> {
        if !(t > 0.0) {
            return domain(format!("derivative of a convolution at t = {t}"));
        }
        let base = kernel_conv(&self.pair, self.side, &*self.inner, t, &self.spec)?;
        let slope_reg = |u: f64| self.pair.scaled_slope(self.side, u);
        let slope = conv_with(&self.pair, self.side, &slope_reg, &*self.inner, t, &self.spec)?;
        let moment = kernel_conv(&self.pair, self.side, &*self.inner_times_deriv, t, &self.spec)?;
        let terms = [base, slope, moment];
        let sum: f64 = terms.iter().map(|r| r.value).sum();
        let err: f64 = terms
            .iter()
            .map(|r| r.est_error + 16.0 * f64::EPSILON * r.value.abs())
            .sum();
        // a sum inside its own error bound is indistinguishable from 0
        let value = if sum.abs() <= 2.0 * err { 0.0 } else { sum / t };
        Ok((value, err / t))
    }

    fn exponent(&self) -> f64 {
        self.claim
    }

    fn derivative(&self) -> Result<ProfileRef> {
        let me = SlopeProfile {
            pair: self.pair.clone(),
            side: self.side,
            inner: self.inner.clone(),
            inner_times_deriv: self.inner_times_deriv.clone(),
            claim: self.claim,
            spec: self.spec,
        };
        Ok(Arc::new(FdProfile::new(Arc::new(me))))
    }

    fn smoothness(&self) -> f64 {
        self.pair.smoothness(self.side).min(self.inner.smoothness())
    }

    fn is_approximate(&self) -> bool {
        self.inner.is_approximate() || self.inner_times_deriv.is_approximate()
    }
}

/// Profile of x -> (M * f)(x).
pub fn gfi_profile(pair: &KernelPair, prof: ProfileRef, spec: &QuadSpec) -> Result<ProfileRef> {
    ConvProfile::new(pair, Side::M, prof, spec)
}

/// Profile of the Caputo-type GFD x -> (K * f')(x); the plain derivative for Classical.
pub fn gfd_profile(pair: &KernelPair, prof: ProfileRef, spec: &QuadSpec) -> Result<ProfileRef> {
    if prof.is_zero() {
        return Ok(Arc::new(Const(0.0)));
    }
    let d = prof.derivative()?;
    if pair.is_classical() {
        return Ok(d);
    }
    ConvProfile::new(pair, Side::K, d, spec)
}

/// f(0) for profiles finite at 0.
pub fn value_at_zero(prof: &dyn Profile) -> Result<f64> {
    if prof.is_zero() {
        return Ok(0.0);
    }
    let q = prof.exponent();
    if q < 0.0 {
        return domain(format!(
            "f is unbounded at 0 (leading exponent {q}); the RL-type derivative needs f(0)"
        ));
    }
    if q > 0.0 {
        return Ok(0.0);
    }
    prof.value(0.0)
}

/// Profile of the RL-type GFD: Caputo GFD + K(x) f(0).
pub fn rl_gfd_profile(pair: &KernelPair, prof: ProfileRef, spec: &QuadSpec) -> Result<ProfileRef> {
    let f0 = value_at_zero(&*prof)?;
    let caputo = gfd_profile(pair, prof, spec)?;
    if pair.is_classical() || f0 == 0.0 {
        return Ok(caputo);
    }
    Ok(Sum::new(vec![(1.0, caputo), (f0, KernelProfile::new(pair, Side::K)?)]))
}

fn check_point(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        domain(format!("evaluation point x = {x} must be positive"))
    }
}

/// GFI (M * f)(x).
pub fn gfi(pair: &KernelPair, prof: &ProfileRef, x: f64, spec: &QuadSpec) -> Result<f64> {
    check_point(x)?;
    gfi_profile(pair, prof.clone(), spec)?.value(x)
}

/// Caputo-type GFD (K * f')(x).
pub fn gfd_caputo(pair: &KernelPair, prof: &ProfileRef, x: f64, spec: &QuadSpec) -> Result<f64> {
    check_point(x)?;
    gfd_profile(pair, prof.clone(), spec)?.value(x)
}

/// RL-type GFD computed as Caputo GFD + K(x) f(0).
pub fn gfd_rl(pair: &KernelPair, prof: &ProfileRef, x: f64, spec: &QuadSpec) -> Result<f64> {
    check_point(x)?;
    rl_gfd_profile(pair, prof.clone(), spec)?.value(x)
}

fn interval(op: &dyn Profile, a: f64, b: f64) -> Result<f64> {
    Ok(interval_est(op, a, b)?.0)
}

/// sgn(b - a) (op(max) - op(min)) with op(0) = 0, and its error estimate.
pub fn interval_est(op: &dyn Profile, a: f64, b: f64) -> Result<(f64, f64)> {
    if !(a >= 0.0 && b >= 0.0) {
        return domain(format!("interval [{a}, {b}] must lie in [0, inf)"));
    }
    if a == b {
        return Ok((0.0, 0.0));
    }
    let at = |s: f64| if s == 0.0 { Ok((0.0, 0.0)) } else { op.value_est(s) };
    let (lo, hi) = (a.min(b), a.max(b));
    let ((vh, eh), (vl, el)) = (at(hi)?, at(lo)?);
    let v = vh - vl;
    Ok((if b > a { v } else { -v }, eh + el))
}

/// GFI on [a, b]: sgn(b - a) (I^max - I^min), with I at 0 equal to 0.
pub fn gfi_interval(pair: &KernelPair, prof: &ProfileRef, a: f64, b: f64, spec: &QuadSpec) -> Result<f64> {
    interval(&*gfi_profile(pair, prof.clone(), spec)?, a, b)
}

/// Caputo-type GFD on [a, b], mirroring [`gfi_interval`].
pub fn gfd_interval(pair: &KernelPair, prof: &ProfileRef, a: f64, b: f64, spec: &QuadSpec) -> Result<f64> {
    interval(&*gfd_profile(pair, prof.clone(), spec)?, a, b)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Additivity {
    pub gfi: f64,
    pub gfd: f64,
}

/// |I[a,b] + I[b,c] - I[a,c]| and the GFD analog.
pub fn additivity_residual(
    pair: &KernelPair,
    prof: &ProfileRef,
    a: f64,
    b: f64,
    c: f64,
    spec: &QuadSpec,
) -> Result<Additivity> {
    if !(0.0 <= a && a < b && b < c) {
        return domain(format!("additivity needs 0 <= a < b < c, got {a}, {b}, {c}"));
    }
    let i = gfi_profile(pair, prof.clone(), spec)?;
    let d = gfd_profile(pair, prof.clone(), spec)?;
    let res = |op: &dyn Profile| -> Result<f64> {
        Ok((interval(op, a, b)? + interval(op, b, c)? - interval(op, a, c)?).abs())
    };
    Ok(Additivity {
        gfi: res(&*i)?,
        gfd: res(&*d)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FtResiduals {
    /// |I[a,x] D* f - (f(x) - f(a))|
    pub ft2: f64,
    /// |D* (I[a,.] f)(x) - f(x)|
    pub ft1: f64,
}

/// Both fundamental-theorem residuals, using `prof` as f for the second and
/// as g for the first.
pub fn ft_residuals(pair: &KernelPair, prof: &ProfileRef, a: f64, x: f64, spec: &QuadSpec) -> Result<FtResiduals> {
    Ok(FtResiduals {
        ft2: ft2_residual(pair, prof, a, x, spec)?,
        ft1: ft1_residual(pair, prof, x, spec)?,
    })
}

pub fn ft2_residual(pair: &KernelPair, prof: &ProfileRef, a: f64, x: f64, spec: &QuadSpec) -> Result<f64> {
    if !(a >= 0.0 && x > a) {
        return domain(format!("FT2 needs 0 <= a < x, got a = {a}, x = {x}"));
    }
    let d = gfd_profile(pair, prof.clone(), &spec.tightened())?;
    let lhs = gfi_interval(pair, &d, a, x, spec)?;
    let fa = if a == 0.0 { value_at_zero(&**prof)? } else { prof.value(a)? };
    Ok((lhs - (prof.value(x)? - fa)).abs())
}

/// The lower limit of I[a, .] only shifts by a constant, so it drops out of D*.
pub fn ft1_residual(pair: &KernelPair, prof: &ProfileRef, x: f64, spec: &QuadSpec) -> Result<f64> {
    check_point(x)?;
    let big = gfi_profile(pair, prof.clone(), &spec.tightened())?;
    let lhs = gfd_caputo(pair, &big, x, spec)?;
    Ok((lhs - prof.value(x)?).abs())
}

/// D*(f g)(x) - D*f(x) g(x) - f(x) D*g(x).
pub fn leibniz_defect(
    pair: &KernelPair,
    f: &ProfileRef,
    g: &ProfileRef,
    x: f64,
    spec: &QuadSpec,
) -> Result<f64> {
    let fg = Product::new(f.clone(), g.clone());
    let dfg = gfd_caputo(pair, &fg, x, spec)?;
    let df = gfd_caputo(pair, f, x, spec)?;
    let dg = gfd_caputo(pair, g, x, spec)?;
    Ok(dfg - df * g.value(x)? - f.value(x)? * dg)
}

/// D*(D* f)(x) minus the derivative of order twice the pair's: the first
/// derivative for PowerRL(0.5), the second for Classical.
pub fn semigroup_defect(pair: &KernelPair, prof: &ProfileRef, x: f64, spec: &QuadSpec) -> Result<f64> {
    check_point(x)?;
    let target = match (pair.family(), pair.alpha()) {
        (KernelFamily::Classical, _) => prof.derivative()?.derivative()?,
        (KernelFamily::PowerRL, Some(a)) if a == 0.5 => prof.derivative()?,
        _ => {
            return domain(format!(
                "semigroup defect is defined for PowerRL(0.5) and Classical, not {}",
                pair.label()
            ))
        }
    };
    let once = gfd_profile(pair, prof.clone(), &spec.tightened())?;
    let twice = gfd_caputo(pair, &once, x, spec)?;
    Ok(twice - target.value(x)?)
}

/// |I[a,x] D_[a,.] F - (F(x) - F(a))| with the RL-type interval derivative
/// D_[a,s] F = D F(s) - D F(a). Fails to vanish for a > 0.
pub fn rl_interval_ft2_residual(
    pair: &KernelPair,
    prof: &ProfileRef,
    a: f64,
    x: f64,
    spec: &QuadSpec,
) -> Result<f64> {
    if !(a > 0.0 && x > a) {
        return domain(format!("needs 0 < a < x, got a = {a}, x = {x}"));
    }
    let inner = spec.tightened();
    let d = rl_gfd_profile(pair, prof.clone(), &inner)?;
    let da = d.value(a)?;
    let g = Sum::new(vec![(1.0, d), (-da, Arc::new(Const(1.0)))]);
    let lhs = gfi_interval(pair, &g, a, x, spec)?;
    Ok((lhs - (prof.value(x)? - prof.value(a)?)).abs())
}

/// Largest relative mismatch between `prof.derivative()` and central differences.
pub fn check_derivative(prof: &dyn Profile, points: &[f64]) -> Result<f64> {
    let d = prof.derivative()?;
    let mut worst = 0.0f64;
    for &t in points {
        let fd = central_difference(&|s| prof.value(s), t)?;
        let sym = d.value(t)?;
        worst = worst.max((fd - sym).abs() / sym.abs().max(1.0));
    }
    Ok(worst)
}
