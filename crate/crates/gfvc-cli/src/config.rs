//! Run configuration: declarations and tasks as read from TOML, and their
//! resolution into executable jobs.

use fieldlang::{parse, FieldExpr};
use gfvc::fields::{ExprField, FieldRef, VecField};
use gfvc::geometry::{
    Box3D, Description, Patch, PiecewiseSimpleSurface, PolygonalChain, SimpleLine3D,
    SimpleRegion2D, ZSimpleRegion3D,
};
use gfvc::gfc1d::{ExprProfile, ProfileRef};
use gfvc::occ::CoordSystem;
use gfvc::vectorops::KernelTriple;
use gfvc::{KernelFamily, KernelPair, QuadSpec};
use serde::Deserialize;
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
#[error("{path}: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

fn err<T>(path: impl Into<String>, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        path: path.into(),
        message: message.into(),
    })
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub output: OutputDecl,
    #[serde(default)]
    pub quad: Option<toml::Table>,
    #[serde(default)]
    pub kernels: BTreeMap<String, KernelDecl>,
    #[serde(default)]
    pub fields: BTreeMap<String, FieldDecl>,
    #[serde(default)]
    pub geometry: BTreeMap<String, GeometryDecl>,
    #[serde(default)]
    pub tasks: Vec<TaskDecl>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputDecl {
    pub path: Option<String>,
    pub format: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDecl {
    pub family: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

/// One family for all axes, or one pair per axis.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelDecl {
    pub family: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub axes: Option<Vec<PairDecl>>,
    #[serde(default)]
    pub unverified: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDecl {
    pub expr: Option<String>,
    pub components: Option<[String; 3]>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeometryDecl {
    Rectangle {
        #[serde(default = "xy_axes")]
        axes: [usize; 2],
        u: [f64; 2],
        v: [f64; 2],
    },
    Region {
        outer_axis: usize,
        inner_axis: usize,
        outer: [f64; 2],
        inner_lo: String,
        inner_hi: String,
        alt: Option<DescriptionDecl>,
    },
    Box {
        lo: [f64; 3],
        hi: [f64; 3],
    },
    BoxWithoutBottom {
        lo: [f64; 3],
        hi: [f64; 3],
    },
    Chain {
        vertices: Vec<[f64; 3]>,
    },
    Segment {
        from: [f64; 3],
        to: [f64; 3],
    },
    Line {
        primary: usize,
        coords: [String; 3],
        range: [f64; 2],
    },
    FlatPatch {
        normal: usize,
        level: f64,
        u: [f64; 2],
        v: [f64; 2],
        #[serde(default = "one")]
        sign: f64,
    },
    ZSimple {
        x: [f64; 2],
        y: [f64; 2],
        z_lo: String,
        z_hi: String,
    },
}

fn xy_axes() -> [usize; 2] {
    [0, 1]
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptionDecl {
    pub outer_axis: usize,
    pub inner_axis: usize,
    pub outer: [f64; 2],
    pub inner_lo: String,
    pub inner_hi: String,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskDecl {
    pub name: Option<String>,
    pub kind: String,
    pub kernel: String,
    pub op: Option<String>,
    pub theorem: Option<String>,
    pub field: Option<String>,
    pub field2: Option<String>,
    pub geometry: Option<String>,
    pub coords: Option<String>,
    pub point: Option<Vec<f64>>,
    pub lower: Option<f64>,
    pub xs: Option<Vec<f64>>,
    pub component: Option<usize>,
    pub samples: Option<usize>,
    pub expect: Option<f64>,
    pub tol: Option<f64>,
    pub min_residual: Option<f64>,
    pub quad: Option<toml::Table>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<RunConfig, ConfigError> {
        toml::from_str(text).or_else(|e| err("config", e.message().to_string() + &span_hint(text, e.span())))
    }
}

fn span_hint(text: &str, span: Option<std::ops::Range<usize>>) -> String {
    match span {
        Some(s) => format!(" (line {})", text[..s.start].lines().count().max(1)),
        None => String::new(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskKind {
    Verify,
    Eval,
    Theorem,
}

impl TaskKind {
    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Verify => "verify",
            TaskKind::Eval => "eval",
            TaskKind::Theorem => "theorem",
        }
    }
}

/// One-dimensional operators on a profile in x.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op1 {
    Gfi,
    GfdCaputo,
    GfdRl,
    GfiInterval,
    GfdInterval,
    Ft1,
    Ft2,
    RlIntervalFt2,
    Semigroup,
    Leibniz,
}

/// Vector operators at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op3 {
    Grad,
    Div,
    Curl,
    Laplacian,
    Leibniz,
    Identities,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremKind {
    GradientRegional,
    GradientLine,
    Green,
    Stokes,
    Gauss,
}

#[derive(Debug, Clone)]
pub enum Geom {
    Region(SimpleRegion2D),
    Box(Box3D),
    BoxWithoutBottom(Box3D),
    Chain(PolygonalChain),
    Line(SimpleLine3D),
    Surface(PiecewiseSimpleSurface),
    ZSimple(ZSimpleRegion3D),
}

impl Geom {
    fn kind(&self) -> &'static str {
        match self {
            Geom::Region(_) => "region",
            Geom::Box(_) => "box",
            Geom::BoxWithoutBottom(_) => "box-without-bottom",
            Geom::Chain(_) => "chain",
            Geom::Line(_) => "line",
            Geom::Surface(_) => "flat-patch",
            Geom::ZSimple(_) => "z-simple",
        }
    }
}

#[derive(Debug, Clone)]
pub enum Work {
    Verify { xs: Vec<f64> },
    Eval1 { op: Op1, f: ProfileRef, g: Option<ProfileRef>, x: f64, lower: f64 },
    Eval3 {
        op: Op3,
        u: Option<FieldRef>,
        f: Option<VecField>,
        g: Option<FieldRef>,
        points: Vec<[f64; 3]>,
        component: usize,
        coords: Option<CoordSystem>,
    },
    Volume { f: FieldRef, b: Box3D },
    Theorem {
        theorem: TheoremKind,
        u: Option<FieldRef>,
        f: Option<VecField>,
        geometry: Geom,
        coords: Option<CoordSystem>,
    },
}

/// A fully resolved task.
#[derive(Debug, Clone)]
pub struct Job {
    pub name: String,
    pub kind: TaskKind,
    pub label: String,
    pub kernel: KernelTriple,
    pub field_text: String,
    pub geometry_text: String,
    pub work: Work,
    pub expect: Option<f64>,
    pub tol: f64,
    pub min_residual: Option<f64>,
    pub spec: QuadSpec,
}

pub struct Resolved {
    pub jobs: Vec<Job>,
    pub output: OutputDecl,
}

/// Options that affect resolution.
#[derive(Debug, Clone, Copy)]
pub struct ResolveOptions {
    pub tol_scale: f64,
    pub seed: u64,
}

fn merge_quad(base: &toml::Table, over: Option<&toml::Table>, path: &str) -> Result<QuadSpec, ConfigError> {
    let mut t = base.clone();
    if let Some(o) = over {
        for (k, v) in o {
            t.insert(k.clone(), v.clone());
        }
    }
    let spec: QuadSpec = toml::Value::Table(t)
        .try_into()
        .or_else(|e: toml::de::Error| err(path, e.message().to_string()))?;
    spec.validate().or_else(|e| err(path, e.to_string()))?;
    Ok(spec)
}

fn parse_expr(text: &str, path: &str) -> Result<FieldExpr, ConfigError> {
    parse(text).or_else(|e| err(path, format!("cannot parse '{text}': {e}")))
}

fn pair(decl_family: &str, params: &BTreeMap<String, f64>, path: &str) -> Result<KernelPair, ConfigError> {
    let Some(family) = KernelFamily::from_name(decl_family) else {
        let known: Vec<&str> = KernelFamily::ALL.iter().map(|f| f.name()).collect();
        return err(
            format!("{path}.family"),
            format!("unknown kernel family '{decl_family}' (known: {})", known.join(", ")),
        );
    };
    KernelPair::new(family, params).or_else(|e| err(format!("{path}.params"), e.to_string()))
}

fn kernel(name: &str, d: &KernelDecl) -> Result<KernelTriple, ConfigError> {
    let path = format!("kernels.{name}");
    match (&d.family, &d.axes) {
        (Some(f), None) => Ok(KernelTriple::uniform(pair(f, &d.params, &path)?)),
        (None, Some(axes)) => {
            if axes.len() != 3 {
                return err(format!("{path}.axes"), format!("expected 3 entries, got {}", axes.len()));
            }
            let p = |k: usize| pair(&axes[k].family, &axes[k].params, &format!("{path}.axes[{k}]"));
            Ok(KernelTriple([p(0)?, p(1)?, p(2)?]))
        }
        _ => err(path, "give exactly one of 'family' or 'axes'"),
    }
}

fn region_desc(d: &DescriptionDecl, path: &str) -> Result<Description, ConfigError> {
    Ok(Description {
        outer_axis: d.outer_axis,
        inner_axis: d.inner_axis,
        outer: (d.outer[0], d.outer[1]),
        inner_lo: parse_expr(&d.inner_lo, &format!("{path}.inner_lo"))?,
        inner_hi: parse_expr(&d.inner_hi, &format!("{path}.inner_hi"))?,
    })
}

fn check_axis(a: usize, path: &str) -> Result<(), ConfigError> {
    if a < 3 {
        Ok(())
    } else {
        err(path, format!("axis {a} outside 0..3"))
    }
}

fn geometry(name: &str, d: &GeometryDecl) -> Result<Geom, ConfigError> {
    let path = format!("geometry.{name}");
    let rect = |axes: [usize; 2], u: [f64; 2], v: [f64; 2]| -> Result<SimpleRegion2D, ConfigError> {
        check_axis(axes[0], &format!("{path}.axes"))?;
        check_axis(axes[1], &format!("{path}.axes"))?;
        if axes[0] == axes[1] {
            return err(format!("{path}.axes"), "axes must differ");
        }
        Ok(SimpleRegion2D::rectangle(axes[0], axes[1], (u[0], u[1]), (v[0], v[1])))
    };
    let (g, problems) = match d {
        GeometryDecl::Rectangle { axes, u, v } => {
            let r = rect(*axes, *u, *v)?;
            let p = r.validate();
            (Geom::Region(r), p)
        }
        GeometryDecl::Region {
            outer_axis,
            inner_axis,
            outer,
            inner_lo,
            inner_hi,
            alt,
        } => {
            check_axis(*outer_axis, &format!("{path}.outer_axis"))?;
            check_axis(*inner_axis, &format!("{path}.inner_axis"))?;
            let main = region_desc(
                &DescriptionDecl {
                    outer_axis: *outer_axis,
                    inner_axis: *inner_axis,
                    outer: *outer,
                    inner_lo: inner_lo.clone(),
                    inner_hi: inner_hi.clone(),
                },
                &path,
            )?;
            let alt = alt.as_ref().map(|a| region_desc(a, &format!("{path}.alt"))).transpose()?;
            let r = SimpleRegion2D::new(main, alt);
            let p = r.validate();
            (Geom::Region(r), p)
        }
        GeometryDecl::Box { lo, hi } => {
            let b = Box3D::new(*lo, *hi);
            let p = b.validate();
            (Geom::Box(b), p)
        }
        GeometryDecl::BoxWithoutBottom { lo, hi } => {
            let b = Box3D::new(*lo, *hi);
            let p = b.validate();
            (Geom::BoxWithoutBottom(b), p)
        }
        GeometryDecl::Chain { vertices } => {
            let c = PolygonalChain::new(vertices.clone());
            let p = c.validate();
            (Geom::Chain(c), p)
        }
        GeometryDecl::Segment { from, to } => {
            let l = SimpleLine3D::segment(*from, *to).or_else(|e| err(&path, e.to_string()))?;
            let p = l.validate();
            (Geom::Line(l), p)
        }
        GeometryDecl::Line { primary, coords, range } => {
            check_axis(*primary, &format!("{path}.primary"))?;
            let c = [
                parse_expr(&coords[0], &format!("{path}.coords[0]"))?,
                parse_expr(&coords[1], &format!("{path}.coords[1]"))?,
                parse_expr(&coords[2], &format!("{path}.coords[2]"))?,
            ];
            let l = SimpleLine3D::new(*primary, c, range[0], range[1]);
            let p = l.validate();
            (Geom::Line(l), p)
        }
        GeometryDecl::FlatPatch { normal, level, u, v, sign } => {
            check_axis(*normal, &format!("{path}.normal"))?;
            let (a, b) = ((normal + 1) % 3, (normal + 2) % 3);
            let axes = [a.min(b), a.max(b)];
            let patch = Patch::flat(*normal, *level, rect(axes, *u, *v)?, *sign);
            let p = patch.validate();
            (Geom::Surface(PiecewiseSimpleSurface::new(vec![patch])), p)
        }
        GeometryDecl::ZSimple { x, y, z_lo, z_hi } => {
            let w = ZSimpleRegion3D {
                base: rect([0, 1], *x, *y)?,
                z_lo: parse_expr(z_lo, &format!("{path}.z_lo"))?,
                z_hi: parse_expr(z_hi, &format!("{path}.z_hi"))?,
            };
            let p = w.validate();
            (Geom::ZSimple(w), p)
        }
    };
    if problems.is_empty() {
        Ok(g)
    } else {
        err(path, problems.join("; "))
    }
}

fn coords(name: &str, path: &str) -> Result<CoordSystem, ConfigError> {
    CoordSystem::from_name(name).map_or_else(
        || err(path, format!("unknown coordinate system '{name}' (known: cartesian, cylindrical, spherical)")),
        Ok,
    )
}

fn op1(name: &str) -> Option<Op1> {
    Some(match name {
        "gfi" => Op1::Gfi,
        "gfd-caputo" => Op1::GfdCaputo,
        "gfd-rl" => Op1::GfdRl,
        "gfi-interval" => Op1::GfiInterval,
        "gfd-interval" => Op1::GfdInterval,
        "ft1" => Op1::Ft1,
        "ft2" => Op1::Ft2,
        "rl-interval-ft2" => Op1::RlIntervalFt2,
        "semigroup" => Op1::Semigroup,
        "leibniz-1d" => Op1::Leibniz,
        _ => return None,
    })
}

fn op3(name: &str) -> Option<Op3> {
    Some(match name {
        "grad" => Op3::Grad,
        "div" => Op3::Div,
        "curl" => Op3::Curl,
        "laplacian" => Op3::Laplacian,
        "leibniz" => Op3::Leibniz,
        "identities" => Op3::Identities,
        _ => return None,
    })
}

fn theorem(name: &str) -> Option<TheoremKind> {
    Some(match name {
        "gradient-regional" => TheoremKind::GradientRegional,
        "gradient-line" => TheoremKind::GradientLine,
        "green" => TheoremKind::Green,
        "stokes" => TheoremKind::Stokes,
        "gauss" => TheoremKind::Gauss,
        _ => return None,
    })
}

pub const OPS_1D: &str = "gfi, gfd-caputo, gfd-rl, gfi-interval, gfd-interval, ft1, ft2, rl-interval-ft2, semigroup, leibniz-1d";
pub const OPS_3D: &str = "grad, div, curl, laplacian, leibniz, identities";
pub const THEOREMS: &str = "gradient-regional, gradient-line, green, stokes, gauss";

struct Ctx<'a> {
    cfg: &'a RunConfig,
    quad: toml::Table,
    opts: ResolveOptions,
}

impl Ctx<'_> {
    fn field_decl(&self, name: &Option<String>, path: &str) -> Result<(String, &FieldDecl), ConfigError> {
        let Some(name) = name else {
            return err(path, "missing");
        };
        match self.cfg.fields.get(name) {
            Some(d) => Ok((name.clone(), d)),
            None => err(path, format!("no field named '{name}'")),
        }
    }

    fn scalar_text(&self, name: &Option<String>, path: &str) -> Result<String, ConfigError> {
        let (n, d) = self.field_decl(name, path)?;
        match &d.expr {
            Some(e) => Ok(e.clone()),
            None => err(path, format!("field '{n}' is a vector; this task needs a scalar 'expr'")),
        }
    }

    fn vector_text(&self, name: &Option<String>, path: &str) -> Result<[String; 3], ConfigError> {
        let (n, d) = self.field_decl(name, path)?;
        match &d.components {
            Some(c) => Ok(c.clone()),
            None => err(path, format!("field '{n}' is a scalar; this task needs 'components'")),
        }
    }

    fn scalar(&self, name: &Option<String>, cs: &Option<CoordSystem>, path: &str) -> Result<FieldRef, ConfigError> {
        let text = self.scalar_text(name, path)?;
        let r = match cs {
            Some(cs) => cs.parse_scalar(&text),
            None => ExprField::parse(&text),
        };
        r.or_else(|e| err(path, format!("cannot parse '{text}': {e}")))
    }

    fn vector(&self, name: &Option<String>, cs: &Option<CoordSystem>, path: &str) -> Result<VecField, ConfigError> {
        let t = self.vector_text(name, path)?;
        let texts = [t[0].as_str(), t[1].as_str(), t[2].as_str()];
        let r = match cs {
            Some(cs) => cs.parse_vec(texts),
            None => gfvc::fields::parse_vec(texts),
        };
        r.or_else(|e| err(path, format!("cannot parse {t:?}: {e}")))
    }

    fn profile(&self, name: &Option<String>, path: &str) -> Result<ProfileRef, ConfigError> {
        let text = self.scalar_text(name, path)?;
        ExprProfile::parse(&text).or_else(|e| err(path, format!("cannot parse '{text}': {e}")))
    }

    fn geometry(&self, name: &Option<String>, path: &str) -> Result<(String, Geom), ConfigError> {
        let Some(name) = name else {
            return err(path, "missing");
        };
        match self.cfg.geometry.get(name) {
            Some(d) => Ok((name.clone(), geometry(name, d)?)),
            None => err(path, format!("no geometry named '{name}'")),
        }
    }

    fn job(&self, i: usize, t: &TaskDecl) -> Result<Job, ConfigError> {
        let path = format!("tasks[{i}]");
        let at = |k: &str| format!("{path}.{k}");
        let kind = match t.kind.as_str() {
            "verify" => TaskKind::Verify,
            "eval" => TaskKind::Eval,
            "theorem" => TaskKind::Theorem,
            other => return err(at("kind"), format!("unknown task kind '{other}' (known: verify, eval, theorem)")),
        };
        let Some(kdecl) = self.cfg.kernels.get(&t.kernel) else {
            return err(at("kernel"), format!("no kernel named '{}'", t.kernel));
        };
        let kt = kernel(&t.kernel, kdecl)?;
        let spec = merge_quad(&self.quad, t.quad.as_ref(), &at("quad"))?;
        if kind != TaskKind::Verify && !kdecl.unverified {
            kt.clone()
                .verified(&spec)
                .or_else(|e| err(format!("kernels.{}", t.kernel), e.to_string()))?;
        }
        let cs = t.coords.as_ref().map(|c| coords(c, &at("coords"))).transpose()?;
        let mut field_text = String::new();
        let mut geometry_text = String::new();
        let mut default_tol = 1e-5;
        let (label, work) = match kind {
            TaskKind::Verify => {
                default_tol = kt.0.iter().map(|p| p.family().sonin_tolerance()).fold(0.0, f64::max);
                let xs = t.xs.clone().unwrap_or_else(|| gfvc::kernels::SONIN_SAMPLES.to_vec());
                ("sonin".to_string(), Work::Verify { xs })
            }
            TaskKind::Eval => {
                let Some(op) = &t.op else {
                    return err(at("op"), "missing");
                };
                if op == "volume-gfi" {
                    let f = self.scalar(&t.field, &cs, &at("field"))?;
                    if cs.is_some() {
                        return err(at("coords"), "'volume-gfi' is only available in Cartesian coordinates");
                    }
                    let (gname, g) = self.geometry(&t.geometry, &at("geometry"))?;
                    let Geom::Box(b) = g else {
                        return err(at("geometry"), format!("'volume-gfi' needs a box, '{gname}' is a {}", g.kind()));
                    };
                    field_text = self.field_echo(t)?;
                    geometry_text = gname;
                    (op.clone(), Work::Volume { f, b })
                } else if let Some(o) = op1(op) {
                    if cs.is_some() {
                        return err(at("coords"), "one-dimensional operators take no coordinate system");
                    }
                    let f = self.profile(&t.field, &at("field"))?;
                    field_text = self.scalar_text(&t.field, &at("field"))?;
                    let g = if o == Op1::Leibniz {
                        let g = self.profile(&t.field2, &at("field2"))?;
                        field_text = format!("{field_text}; {}", self.scalar_text(&t.field2, &at("field2"))?);
                        Some(g)
                    } else {
                        None
                    };
                    let x = match t.point.as_deref() {
                        Some([x]) => *x,
                        _ => return err(at("point"), "one-dimensional operators need point = [x]"),
                    };
                    let needs_lower = matches!(o, Op1::GfiInterval | Op1::GfdInterval | Op1::Ft2 | Op1::RlIntervalFt2);
                    let lower = match (needs_lower, t.lower) {
                        (true, Some(a)) => a,
                        (true, None) => return err(at("lower"), "missing"),
                        (false, Some(_)) => return err(at("lower"), format!("not used by '{op}'")),
                        (false, None) => 0.0,
                    };
                    (op.clone(), Work::Eval1 { op: o, f, g, x, lower })
                } else if let Some(o) = op3(op) {
                    let (u, f, g) = match o {
                        Op3::Grad | Op3::Laplacian => (Some(self.scalar(&t.field, &cs, &at("field"))?), None, None),
                        Op3::Div | Op3::Curl => (None, Some(self.vector(&t.field, &cs, &at("field"))?), None),
                        Op3::Leibniz => (
                            Some(self.scalar(&t.field, &cs, &at("field"))?),
                            None,
                            Some(self.scalar(&t.field2, &cs, &at("field2"))?),
                        ),
                        Op3::Identities => (
                            Some(self.scalar(&t.field, &cs, &at("field"))?),
                            Some(self.vector(&t.field2, &cs, &at("field2"))?),
                            None,
                        ),
                    };
                    if cs.is_some() && matches!(o, Op3::Laplacian | Op3::Leibniz | Op3::Identities) {
                        return err(at("coords"), format!("'{op}' is only available in Cartesian coordinates"));
                    }
                    field_text = self.field_echo(t)?;
                    let points = self.points(t, &at("point"))?;
                    if points.len() > 1 || t.geometry.is_some() {
                        geometry_text = format!("{} sampled points (seed {})", points.len(), self.opts.seed);
                    }
                    let component = t.component.unwrap_or(0);
                    check_axis(component, &at("component"))?;
                    let work = Work::Eval3 {
                        op: o,
                        u,
                        f,
                        g,
                        points,
                        component,
                        coords: cs.clone(),
                    };
                    (op.clone(), work)
                } else {
                    return err(at("op"), format!("unknown operator '{op}' (known: {OPS_1D}, {OPS_3D}, volume-gfi)"));
                }
            }
            TaskKind::Theorem => {
                let Some(name) = &t.theorem else {
                    return err(at("theorem"), "missing");
                };
                let Some(th) = theorem(name) else {
                    return err(at("theorem"), format!("unknown theorem '{name}' (known: {THEOREMS})"));
                };
                let (gname, g) = self.geometry(&t.geometry, &at("geometry"))?;
                let wanted: &[&str] = match th {
                    TheoremKind::GradientRegional => &["chain", "line"],
                    TheoremKind::GradientLine => &["line"],
                    TheoremKind::Green => &["region"],
                    TheoremKind::Stokes => &["box-without-bottom", "flat-patch"],
                    TheoremKind::Gauss => &["box", "z-simple"],
                };
                if !wanted.contains(&g.kind()) {
                    return err(
                        at("geometry"),
                        format!("'{name}' needs a {} geometry, '{gname}' is a {}", wanted.join(" or "), g.kind()),
                    );
                }
                if cs.is_some() && matches!(th, TheoremKind::GradientRegional | TheoremKind::Green) {
                    return err(at("coords"), format!("'{name}' is only available in Cartesian coordinates"));
                }
                if cs.is_some() && matches!(g, Geom::ZSimple(_)) {
                    return err(at("coords"), "coordinate Gauss checks need a box");
                }
                let (u, f) = match th {
                    TheoremKind::GradientRegional | TheoremKind::GradientLine => {
                        (Some(self.scalar(&t.field, &cs, &at("field"))?), None)
                    }
                    _ => (None, Some(self.vector(&t.field, &cs, &at("field"))?)),
                };
                field_text = self.field_echo(t)?;
                geometry_text = gname;
                let work = Work::Theorem {
                    theorem: th,
                    u,
                    f,
                    geometry: g,
                    coords: cs.clone(),
                };
                (name.clone(), work)
            }
        };
        if t.tol.is_some_and(|v| !(v > 0.0)) {
            return err(at("tol"), "must be positive");
        }
        let tol = t.tol.unwrap_or(default_tol) * self.opts.tol_scale;
        let label = match &t.coords {
            Some(c) => format!("{label}@{c}"),
            None => label,
        };
        Ok(Job {
            name: t.name.clone().unwrap_or_else(|| format!("{}-{i}", kind.name())),
            kind,
            label,
            kernel: kt,
            field_text,
            geometry_text,
            work,
            expect: t.expect,
            tol,
            min_residual: t.min_residual,
            spec,
        })
    }

    fn field_echo(&self, t: &TaskDecl) -> Result<String, ConfigError> {
        let one = |n: &Option<String>| -> String {
            match n.as_ref().and_then(|n| self.cfg.fields.get(n)) {
                Some(FieldDecl { expr: Some(e), .. }) => e.clone(),
                Some(FieldDecl {
                    components: Some(c), ..
                }) => format!("({}, {}, {})", c[0], c[1], c[2]),
                _ => String::new(),
            }
        };
        Ok(match &t.field2 {
            Some(_) => format!("{}; {}", one(&t.field), one(&t.field2)),
            None => one(&t.field),
        })
    }

    /// An explicit point, or `samples` seeded points inside a box geometry.
    fn points(&self, t: &TaskDecl, path: &str) -> Result<Vec<[f64; 3]>, ConfigError> {
        use rand::{Rng, SeedableRng};
        match (&t.point, t.samples) {
            (Some(p), None) => match p.as_slice() {
                [a, b, c] => Ok(vec![[*a, *b, *c]]),
                _ => err(path, "vector operators need point = [x, y, z]"),
            },
            (None, Some(n)) => {
                let gpath = path.replace("point", "geometry");
                let (gname, g) = self.geometry(&t.geometry, &gpath)?;
                let Geom::Box(b) = g else {
                    return err(gpath, format!("sampling needs a box geometry, '{gname}' is not one"));
                };
                if n == 0 {
                    return err(path.replace("point", "samples"), "must be positive");
                }
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(self.opts.seed);
                Ok((0..n)
                    .map(|_| {
                        let mut p = [0.0; 3];
                        for k in 0..3 {
                            p[k] = rng.gen_range(b.lo[k]..=b.hi[k]);
                        }
                        p
                    })
                    .collect())
            }
            _ => err(path, "give exactly one of 'point' or 'samples' (with a box 'geometry')"),
        }
    }
}

/// Resolves every reference and parses every expression; the first problem
/// is reported with the path of the offending entry.
pub fn resolve(cfg: &RunConfig, opts: ResolveOptions) -> Result<Resolved, ConfigError> {
    if !(opts.tol_scale > 0.0 && opts.tol_scale.is_finite()) {
        return err("--tol-scale", "must be positive and finite");
    }
    let quad = cfg.quad.clone().unwrap_or_default();
    merge_quad(&quad, None, "quad")?;
    for (name, d) in &cfg.kernels {
        kernel(name, d)?;
    }
    for (name, d) in &cfg.geometry {
        geometry(name, d)?;
    }
    for (name, d) in &cfg.fields {
        let path = format!("fields.{name}");
        match (&d.expr, &d.components) {
            (Some(_), None) | (None, Some(_)) => {}
            _ => return err(path, "give exactly one of 'expr' or 'components'"),
        }
    }
    if cfg.tasks.is_empty() {
        return err("tasks", "no tasks declared");
    }
    if let Some(f) = &cfg.output.format {
        if f != "records" && f != "table" {
            return err("output.format", format!("unknown format '{f}' (known: records, table)"));
        }
    }
    let ctx = Ctx { cfg, quad, opts };
    let jobs = cfg
        .tasks
        .iter()
        .enumerate()
        .map(|(i, t)| ctx.job(i, t))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Resolved {
        jobs,
        output: cfg.output.clone(),
    })
}
