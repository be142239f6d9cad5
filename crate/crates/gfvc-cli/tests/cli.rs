use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn gfvc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gfvc")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn config(name: &str) -> String {
    format!("{}/configs/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn number(line: &str, key: &str) -> f64 {
    let start = line.find(&format!("\"{key}\":")).unwrap() + key.len() + 3;
    let rest = &line[start..];
    rest[..rest.find([',', '}']).unwrap()].parse().unwrap()
}

const GREEN: &str = r#"
[kernels.half]
family = "PowerRL"
params = { alpha = 0.5 }

[fields.rotation]
components = ["-y", "x", "0"]

[geometry.square]
kind = "rectangle"
u = [0.0, 1.0]
v = [0.0, 1.0]

[[tasks]]
name = "green"
kind = "theorem"
theorem = "green"
kernel = "half"
field = "rotation"
geometry = "square"
"#;

#[test]
fn verify_config_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.jsonl");
    let o = gfvc(&["verify-kernels", "--config", &config("verify_half.toml"), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].contains("\"records\":1"));
    assert!(number(lines[1], "abs_residual") < 1e-10);
    assert!(lines[1].contains("\"values\":[") && lines[1].contains("\"status\":\"pass\""));
}

#[test]
fn green_record_has_both_sides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "g.toml", GREEN);
    let o = gfvc(&["check-theorem", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let rec = text.lines().nth(1).unwrap();
    for key in ["lhs", "rhs"] {
        assert!((number(rec, key) - 2.2567583341910252).abs() < 1e-9, "{rec}");
    }
    assert!(number(rec, "abs_residual") < 1e-5);
    assert!(rec.contains("\"seconds\":null"));
}

#[test]
fn table_export_has_fixed_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "g.toml", GREEN);
    let o = gfvc(&["suite", "--config", cfg.to_str().unwrap(), "--format", "table", "--timing"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "task,kernel,alpha,lhs,rhs,abs_residual,rel_residual,seconds");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 8, "{row:?}");
    assert_eq!(row[0], "green");
    assert!(row[7].parse::<f64>().unwrap() >= 0.0);
}

#[test]
fn unknown_family_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", &GREEN.replace("PowerRL", "PowerLaw"));
    let o = gfvc(&["suite", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("kernels.half.family") && err.contains("PowerLaw"), "{err}");
}

#[test]
fn other_config_errors_name_their_entry() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (GREEN.replace("field = \"rotation\"", "field = \"missing\""), "tasks[0].field"),
        (GREEN.replace("\"-y\"", "\"-y +\""), "tasks[0].field"),
        (GREEN.replace("theorem = \"green\"", "theorem = \"gauss\""), "tasks[0].geometry"),
        (GREEN.replace("u = [0.0, 1.0]", "u = [1.0, 0.0]"), "geometry.square"),
        (GREEN.replace("kind = \"theorem\"", "kind = \"plot\""), "tasks[0].kind"),
        (GREEN.replace("alpha = 0.5", "alpha = 1.5"), "kernels.half.params"),
        (GREEN.replace("[[tasks]]", "[quad]\nnodes_per_panel = 1\n\n[[tasks]]"), "quad"),
    ];
    for (text, path) in cases {
        let cfg = write(dir.path(), "bad.toml", &text);
        let o = gfvc(&["suite", "--config", cfg.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{path}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert!(err.contains(path), "{path}: {err}");
    }
}

#[test]
fn unverified_kernels_are_refused_outside_verify_tasks() {
    let dir = tempfile::tempdir().unwrap();
    let text = GREEN.replace(
        "family = \"PowerRL\"\nparams = { alpha = 0.5 }",
        "family = \"MittagLefflerPair\"\nparams = { alpha = 0.5 }",
    );
    let cfg = write(dir.path(), "ml.toml", &text);
    let o = gfvc(&["suite", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("Sonin"));
}

#[test]
fn unwritable_output_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "g.toml", GREEN);
    let o = gfvc(&["suite", "--config", cfg.to_str().unwrap(), "--out", "/nonexistent/dir/r.jsonl"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numeric_failures_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "g.toml", &format!("{GREEN}expect = 2.0\n"));
    let o = gfvc(&["suite", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("\"status\":\"fail\""));

    let cfg = write(dir.path(), "g.toml", GREEN);
    let o = gfvc(&["suite", "--config", cfg.to_str().unwrap(), "--tol-scale", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn subcommands_filter_task_kinds() {
    let o = gfvc(&["eval-op", "--config", &config("green.toml")]);
    assert_eq!(o.status.code(), Some(2));
    // The catalog run includes the pair that fails its Sonin check.
    let o = gfvc(&["verify-kernels"]);
    assert_eq!(o.status.code(), Some(1));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 9);
    let failing: Vec<&str> = text.lines().skip(1).filter(|l| !l.contains("\"status\":\"pass\"")).collect();
    assert_eq!(failing.len(), 1, "{failing:?}");
    assert!(failing[0].contains("sonin-MittagLefflerPair"));
    let o = gfvc(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stdout).unwrap().contains("HanygaPair"));
}

const SAMPLED: &str = r#"
[kernels.half]
family = "PowerRL"
params = { alpha = 0.5 }

[fields.u]
expr = "x^2*y+z"

[fields.f]
components = ["x*y", "y^2*z", "x*z^2"]

[geometry.cube]
kind = "box"
lo = [0.2, 0.2, 0.2]
hi = [1.5, 1.5, 1.5]

[[tasks]]
kind = "eval"
op = "identities"
kernel = "half"
field = "u"
field2 = "f"
geometry = "cube"
samples = 2

[[tasks]]
kind = "eval"
op = "grad"
kernel = "half"
field = "u"
geometry = "cube"
samples = 2

[[tasks]]
kind = "eval"
op = "div"
kernel = "half"
field = "f"
point = [0.5, 0.6, 0.7]
"#;

#[test]
fn parallel_runs_keep_declared_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.toml", SAMPLED);
    let cfg = cfg.to_str().unwrap();
    let one = gfvc(&["suite", "--config", cfg, "--seed", "7"]);
    let three = gfvc(&["suite", "--config", cfg, "--seed", "7", "--jobs", "3"]);
    assert_eq!(one.status.code(), Some(0), "{}", String::from_utf8_lossy(&one.stdout));
    assert_eq!(one.stdout, three.stdout);
    let other_seed = gfvc(&["suite", "--config", cfg, "--seed", "8"]);
    assert_ne!(one.stdout, other_seed.stdout);
}

#[test]
fn shipped_configs_parse() {
    for entry in std::fs::read_dir(format!("{}/configs", env!("CARGO_MANIFEST_DIR"))).unwrap() {
        let p = entry.unwrap().path();
        let o = gfvc(&["suite", "--config", p.to_str().unwrap(), "--tol-scale", "1e300"]);
        assert_ne!(o.status.code(), Some(2), "{}: {}", p.display(), String::from_utf8_lossy(&o.stderr));
    }
}
