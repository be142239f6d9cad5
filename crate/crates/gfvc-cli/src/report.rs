//! Report output: JSON-lines records and the flat CSV table. Floats are
//! written with 17 significant digits so reruns are byte-identical.

use crate::tasks::Record;

pub const TABLE_COLUMNS: [&str; 8] = ["task", "kernel", "alpha", "lhs", "rhs", "abs_residual", "rel_residual", "seconds"];

/// 17 significant digits in scientific notation; `null` for non-finite values.
pub fn num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".into()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "null".into(), num)
}

fn text(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

pub fn record_json(r: &Record) -> String {
    let values: Vec<String> = r.values.iter().map(|v| num(*v)).collect();
    let fields = [
        ("task", text(&r.task)),
        ("kind", text(r.kind)),
        ("op", text(&r.op)),
        ("kernel", text(&r.kernel)),
        ("alpha", opt(r.alpha)),
        ("field", text(&r.field)),
        ("geometry", text(&r.geometry)),
        ("values", format!("[{}]", values.join(","))),
        ("lhs", opt(r.lhs)),
        ("rhs", opt(r.rhs)),
        ("abs_residual", opt(r.abs_residual)),
        ("rel_residual", opt(r.rel_residual)),
        ("est_error", opt(r.est_error)),
        ("tol", num(r.tol)),
        ("min_residual", opt(r.min_residual)),
        ("status", text(r.status.name())),
        ("message", text(&r.message)),
        ("seconds", opt(r.seconds)),
    ];
    let body: Vec<String> = fields.iter().map(|(k, v)| format!("\"{k}\":{v}")).collect();
    format!("{{{}}}", body.join(","))
}

/// Header line followed by one JSON object per record.
pub fn records(rs: &[Record]) -> String {
    let mut out = format!("{{\"format\":\"gfvc-report\",\"version\":1,\"records\":{}}}\n", rs.len());
    for r in rs {
        out.push_str(&record_json(r));
        out.push('\n');
    }
    out
}

pub fn table(rs: &[Record]) -> String {
    let cell = |v: Option<f64>| v.filter(|x| x.is_finite()).map(num).unwrap_or_default();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(TABLE_COLUMNS).expect("in-memory write");
    for r in rs {
        w.write_record([
            r.task.clone(),
            r.kernel.clone(),
            cell(r.alpha),
            cell(r.lhs),
            cell(r.rhs),
            cell(r.abs_residual),
            cell(r.rel_residual),
            cell(r.seconds),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

/// Human-readable summary for the terminal.
pub fn summary(rs: &[Record]) -> String {
    let mut out = String::new();
    for r in rs {
        let res = r.abs_residual.or(r.lhs).map_or_else(|| "-".into(), |v| format!("{v:.3e}"));
        out.push_str(&format!("{:<5} {:<28} {:<24} {}", r.status.name(), r.task, r.op, res));
        if !r.message.is_empty() && r.status != crate::tasks::Status::Pass {
            out.push_str(&format!("  ({})", r.message));
        }
        out.push('\n');
    }
    out
}
