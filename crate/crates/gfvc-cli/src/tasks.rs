//! Execution of resolved jobs into report records.

use crate::config::{Geom, Job, Op1, Op3, TaskKind, TheoremKind, Work};
use gfvc::geometry::PiecewiseSimpleLine;
use gfvc::gfc1d;
use gfvc::gfint::volume_gfi;
use gfvc::occ::{check_gauss_occ, check_gradient_occ, check_stokes_occ, curl_occ, div_occ, grad_occ};
use gfvc::theorems::{
    check_gauss, check_gradient_line, check_gradient_regional, check_green, check_stokes, gradient_regional_report,
    GaussVolume, StokesSurface, TheoremReport,
};
use gfvc::vectorops::{curl_regional, divergence, grad_regional, identity_defects, laplacian_scalar, leibniz_witness};
use gfvc::Result;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

/// One report record.
#[derive(Debug, Clone)]
pub struct Record {
    pub task: String,
    pub kind: &'static str,
    pub op: String,
    pub kernel: String,
    pub alpha: Option<f64>,
    pub field: String,
    pub geometry: String,
    pub values: Vec<f64>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub abs_residual: Option<f64>,
    pub rel_residual: Option<f64>,
    pub est_error: Option<f64>,
    pub tol: f64,
    pub min_residual: Option<f64>,
    pub status: Status,
    pub message: String,
    pub seconds: Option<f64>,
}

struct Outcome {
    values: Vec<f64>,
    lhs: f64,
    rhs: Option<f64>,
    est_error: Option<f64>,
    geometry: Option<String>,
    note: String,
}

fn scalar(v: f64) -> Outcome {
    Outcome {
        values: vec![],
        lhs: v,
        rhs: None,
        est_error: None,
        geometry: None,
        note: String::new(),
    }
}

fn from_report(r: TheoremReport) -> Outcome {
    Outcome {
        values: vec![],
        lhs: r.lhs,
        rhs: Some(r.rhs),
        est_error: Some(r.est_numerical_error),
        geometry: Some(r.geometry),
        note: r.note,
    }
}

fn eval1(job: &Job, op: Op1, f: &gfc1d::ProfileRef, g: Option<&gfc1d::ProfileRef>, x: f64, a: f64) -> Result<Outcome> {
    let pair = &job.kernel[0];
    let spec = &job.spec;
    let v = match op {
        Op1::Gfi => gfc1d::gfi(pair, f, x, spec)?,
        Op1::GfdCaputo => gfc1d::gfd_caputo(pair, f, x, spec)?,
        Op1::GfdRl => gfc1d::gfd_rl(pair, f, x, spec)?,
        Op1::GfiInterval => gfc1d::gfi_interval(pair, f, a, x, spec)?,
        Op1::GfdInterval => gfc1d::gfd_interval(pair, f, a, x, spec)?,
        Op1::Ft1 => gfc1d::ft1_residual(pair, f, x, spec)?,
        Op1::Ft2 => gfc1d::ft2_residual(pair, f, a, x, spec)?,
        Op1::RlIntervalFt2 => gfc1d::rl_interval_ft2_residual(pair, f, a, x, spec)?,
        Op1::Semigroup => gfc1d::semigroup_defect(pair, f, x, spec)?,
        Op1::Leibniz => gfc1d::leibniz_defect(pair, f, g.expect("resolved with a second field"), x, spec)?,
    };
    let mut o = scalar(v);
    if matches!(op, Op1::Ft1 | Op1::Ft2 | Op1::RlIntervalFt2) {
        o.rhs = Some(0.0);
    }
    Ok(o)
}

fn eval3(job: &Job, work: &Work) -> Result<Outcome> {
    let Work::Eval3 {
        op,
        u,
        f,
        g,
        points,
        component,
        coords,
    } = work
    else {
        unreachable!()
    };
    let (kt, spec) = (&job.kernel, &job.spec);
    let mut values = Vec::new();
    let mut worst: f64 = 0.0;
    for &p in points {
        let (comps, v) = match op {
            Op3::Grad => {
                let r = match coords {
                    Some(cs) => grad_occ(cs, kt, u.as_ref().unwrap(), p, spec)?,
                    None => grad_regional(kt, u.as_ref().unwrap(), p, spec)?,
                };
                (r.components.to_vec(), r.components[*component])
            }
            Op3::Div => {
                let v = match coords {
                    Some(cs) => div_occ(cs, kt, f.as_ref().unwrap(), p, spec)?,
                    None => divergence(kt, f.as_ref().unwrap(), p, spec)?,
                };
                (vec![], v)
            }
            Op3::Curl => {
                let r = match coords {
                    Some(cs) => curl_occ(cs, kt, f.as_ref().unwrap(), p, spec)?,
                    None => curl_regional(kt, f.as_ref().unwrap(), p, spec)?,
                };
                (r.components.to_vec(), r.components[*component])
            }
            Op3::Laplacian => (vec![], laplacian_scalar(kt, u.as_ref().unwrap(), p, spec)?),
            Op3::Leibniz => {
                let r = leibniz_witness(kt, u.as_ref().unwrap(), g.as_ref().unwrap(), p, spec)?;
                (r.components.to_vec(), r.components[*component])
            }
            Op3::Identities => {
                let d = identity_defects(kt, u.as_ref().unwrap(), f.as_ref().unwrap(), p, spec)?;
                let v = d.curl_grad.max_abs().max(d.div_curl.abs());
                (vec![d.curl_grad.max_abs(), d.div_curl], v)
            }
        };
        if points.len() == 1 {
            values = comps;
            worst = v;
        } else if v.abs() >= worst.abs() {
            worst = v;
        }
    }
    let mut o = scalar(worst);
    o.values = values;
    if *op == Op3::Identities {
        o.rhs = Some(0.0);
    }
    Ok(o)
}

fn theorem(job: &Job, work: &Work) -> Result<Outcome> {
    let Work::Theorem {
        theorem,
        u,
        f,
        geometry,
        coords,
    } = work
    else {
        unreachable!()
    };
    let (kt, spec) = (&job.kernel, &job.spec);
    let r = match (theorem, geometry, coords) {
        (TheoremKind::GradientRegional, Geom::Chain(c), _) => check_gradient_regional(kt, u.as_ref().unwrap(), c, spec)?,
        (TheoremKind::GradientRegional, Geom::Line(l), _) => {
            gradient_regional_report(kt, u.as_ref().unwrap(), &PiecewiseSimpleLine::new(vec![l.clone()], false), spec)?
        }
        (TheoremKind::GradientLine, Geom::Line(l), Some(cs)) => check_gradient_occ(cs, kt, u.as_ref().unwrap(), l, spec)?,
        (TheoremKind::GradientLine, Geom::Line(l), None) => check_gradient_line(kt, u.as_ref().unwrap(), l, spec)?,
        (TheoremKind::Green, Geom::Region(r), _) => check_green(kt, f.as_ref().unwrap(), r, spec)?,
        (TheoremKind::Stokes, g, cs) => {
            let s = match g {
                Geom::BoxWithoutBottom(b) => StokesSurface::BoxWithoutBottom(*b),
                Geom::Surface(s) => StokesSurface::Surface(s.clone()),
                _ => unreachable!(),
            };
            match cs {
                Some(cs) => check_stokes_occ(cs, kt, f.as_ref().unwrap(), &s, spec)?,
                None => check_stokes(kt, f.as_ref().unwrap(), &s, spec)?,
            }
        }
        (TheoremKind::Gauss, Geom::Box(b), Some(cs)) => check_gauss_occ(cs, kt, f.as_ref().unwrap(), b, spec)?,
        (TheoremKind::Gauss, g, None) => {
            let v = match g {
                Geom::Box(b) => GaussVolume::Box(*b),
                Geom::ZSimple(w) => GaussVolume::ZSimple(w.clone()),
                _ => unreachable!(),
            };
            check_gauss(kt, f.as_ref().unwrap(), &v, spec)?
        }
        _ => unreachable!("geometry kinds are checked during resolution"),
    };
    Ok(from_report(r))
}

fn outcome(job: &Job) -> Result<Outcome> {
    match &job.work {
        Work::Verify { xs } => {
            let mut values = Vec::new();
            for pair in &job.kernel.0 {
                values.extend(pair.sonin_residual(xs, &job.spec)?.residuals);
            }
            let max = values.iter().fold(0.0f64, |m, r| m.max(r.abs()));
            let mut o = scalar(max);
            o.values = values;
            o.rhs = Some(0.0);
            Ok(o)
        }
        Work::Eval1 { op, f, g, x, lower } => eval1(job, *op, f, g.as_ref(), *x, *lower),
        w @ Work::Eval3 { .. } => eval3(job, w),
        Work::Volume { f, b } => {
            let e = volume_gfi(&job.kernel, f, b, &job.spec)?;
            let mut o = scalar(e.value);
            o.est_error = Some(e.est_error);
            Ok(o)
        }
        w @ Work::Theorem { .. } => theorem(job, w),
    }
}

/// Runs one job; numerical failures become error records.
pub fn run_job(job: &Job, timing: bool) -> Record {
    let start = Instant::now();
    let result = outcome(job);
    let seconds = timing.then(|| start.elapsed().as_secs_f64());
    let mut rec = Record {
        task: job.name.clone(),
        kind: job.kind.name(),
        op: job.label.clone(),
        kernel: job.kernel.label(),
        alpha: job.kernel[0].alpha(),
        field: job.field_text.clone(),
        geometry: job.geometry_text.clone(),
        values: vec![],
        lhs: None,
        rhs: None,
        abs_residual: None,
        rel_residual: None,
        est_error: None,
        tol: job.tol,
        min_residual: job.min_residual,
        status: Status::Error,
        message: String::new(),
        seconds,
    };
    let o = match result {
        Ok(o) => o,
        Err(e) => {
            rec.message = e.to_string();
            return rec;
        }
    };
    rec.values = o.values;
    rec.lhs = Some(o.lhs);
    rec.est_error = o.est_error;
    if let Some(g) = o.geometry {
        rec.geometry = if rec.geometry.is_empty() { g } else { format!("{}: {g}", rec.geometry) };
    }
    rec.message = o.note;
    let rhs = match (job.kind, o.rhs, job.expect) {
        (TaskKind::Theorem, Some(r), _) => Some(r),
        (_, _, Some(e)) => Some(e),
        (_, r, None) => r,
    };
    rec.rhs = rhs;
    let mut ok = true;
    if let Some(r) = rhs {
        let abs = if job.kind == TaskKind::Verify { o.lhs } else { (o.lhs - r).abs() };
        rec.abs_residual = Some(abs);
        rec.rel_residual = Some(abs / 1f64.max(o.lhs.abs()).max(r.abs()));
        ok = match job.min_residual {
            Some(m) => abs > m,
            None => abs < job.tol,
        };
    }
    if let (TaskKind::Theorem, Some(e)) = (job.kind, job.expect) {
        let off = (o.lhs - e).abs().max((rhs.unwrap_or(e) - e).abs());
        if !(off < job.tol) {
            ok = false;
            let extra = format!("sides differ from expected {e} by {off:e}");
            rec.message = if rec.message.is_empty() { extra } else { format!("{}; {extra}", rec.message) };
        }
    }
    if !o.lhs.is_finite() {
        ok = false;
    }
    rec.status = if ok { Status::Pass } else { Status::Fail };
    rec
}
