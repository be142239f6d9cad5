//! Command-line front end: runs kernel verifications, operator evaluations
//! and theorem checks declared in a TOML config and writes a report.

mod config;
mod report;
mod suites;
mod tasks;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{resolve, ConfigError, ResolveOptions, RunConfig, TaskKind};
use gfvc::kernels::catalog;
use gfvc::{KernelFamily, QuadSpec};
use rayon::prelude::*;
use std::path::PathBuf;
use std::process::ExitCode;
use tasks::{run_job, Record, Status};

#[derive(Parser)]
#[command(name = "gfvc", version, about = "General fractional vector calculus checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sonin verification: the config's verify tasks, or the whole catalog.
    VerifyKernels(RunArgs),
    /// Operator evaluations from the config's eval tasks.
    EvalOp(RunArgs),
    /// Theorem residual checks from the config's theorem tasks.
    CheckTheorem(RunArgs),
    /// Every task of a config, or of a built-in suite given by name.
    Suite {
        /// Built-in suite name; see `gfvc list`.
        name: Option<String>,
        #[command(flatten)]
        args: RunArgs,
    },
    /// Kernel catalog and built-in suites.
    List,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Records,
    Table,
}

#[derive(Args)]
struct RunArgs {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report path; defaults to the config's output.path, else stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format; defaults to the config's output.format, else records.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Multiplies every task tolerance.
    #[arg(long, default_value_t = 1.0)]
    tol_scale: f64,
    /// Worker threads; records keep declared order.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Seed for sampled evaluation points.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record wall-clock seconds per task (makes reports run-dependent).
    #[arg(long)]
    timing: bool,
}

enum Failure {
    Usage(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Failure {
        Failure::Usage(e.to_string())
    }
}

fn catalog_config() -> String {
    let mut s = String::new();
    for family in KernelFamily::ALL {
        let params: Vec<String> = family.catalog_params().iter().map(|(k, v)| format!("{k} = {v:?}")).collect();
        s.push_str(&format!(
            "[kernels.{0}]\nfamily = \"{0}\"\nparams = {{ {1} }}\nunverified = true\n\n",
            family.name(),
            params.join(", ")
        ));
    }
    for family in KernelFamily::ALL {
        s.push_str(&format!(
            "[[tasks]]\nname = \"sonin-{0}\"\nkind = \"verify\"\nkernel = \"{0}\"\n\n",
            family.name()
        ));
    }
    s
}

fn load(args: &RunArgs, builtin: Option<&str>, fallback: Option<String>) -> Result<RunConfig, Failure> {
    let text = match (builtin, &args.config) {
        (Some(_), Some(_)) => return Err(Failure::Usage("give either a suite name or --config, not both".into())),
        (Some(name), None) => match suites::get(name) {
            Some(t) => t.to_string(),
            None => {
                return Err(Failure::Usage(format!(
                    "unknown suite '{name}' (known: {})",
                    suites::names().join(", ")
                )))
            }
        },
        (None, Some(path)) => std::fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?,
        (None, None) => match fallback {
            Some(t) => t,
            None => return Err(Failure::Usage("--config is required".into())),
        },
    };
    Ok(RunConfig::from_toml(&text)?)
}

fn run(args: &RunArgs, builtin: Option<&str>, only: Option<TaskKind>, fallback: Option<String>) -> Result<bool, Failure> {
    let cfg = load(args, builtin, fallback)?;
    let resolved = resolve(
        &cfg,
        ResolveOptions {
            tol_scale: args.tol_scale,
            seed: args.seed,
        },
    )?;
    let jobs: Vec<_> = resolved.jobs.into_iter().filter(|j| only.map_or(true, |k| j.kind == k)).collect();
    if jobs.is_empty() {
        let kind = only.map_or("any", |k| k.name());
        return Err(Failure::Usage(format!("the config declares no {kind} tasks")));
    }
    if args.jobs == 0 {
        return Err(Failure::Usage("--jobs must be at least 1".into()));
    }
    let format = match (args.format, resolved.output.format.as_deref()) {
        (Some(f), _) => f,
        (None, Some("table")) => Format::Table,
        _ => Format::Records,
    };
    let out = args.out.clone().or(resolved.output.path.map(PathBuf::from));
    if let Some(p) = &out {
        std::fs::write(p, "").map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let records: Vec<Record> = pool.install(|| jobs.par_iter().map(|j| run_job(j, args.timing)).collect());
    let body = match format {
        Format::Records => report::records(&records),
        Format::Table => report::table(&records),
    };
    match &out {
        Some(p) => {
            std::fs::write(p, body).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
            eprint!("{}", report::summary(&records));
        }
        None => print!("{body}"),
    }
    Ok(records.iter().all(|r| r.status == Status::Pass))
}

fn list() {
    println!("family             params                               m_exp    k_exp    enabled  max|M*K-1|");
    for e in catalog(&QuadSpec::default()) {
        let params: Vec<String> = e.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let exp = |v: Option<f64>| v.map_or_else(|| "-".into(), |x| format!("{x:.4}"));
        let res = match (&e.report, &e.error) {
            (Some(r), _) => format!("{:.3e}", r.max_abs_residual),
            (None, Some(err)) => format!("error: {err}"),
            _ => "-".into(),
        };
        println!(
            "{:<18} {:<36} {:<8} {:<8} {:<8} {}",
            e.family.name(),
            params.join(", "),
            exp(e.m_exponent),
            exp(e.k_exponent),
            e.enabled,
            res
        );
    }
    println!("\nsuites: {}", suites::names().join(", "));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::VerifyKernels(a) => run(a, None, Some(TaskKind::Verify), Some(catalog_config())),
        Command::EvalOp(a) => run(a, None, Some(TaskKind::Eval), None),
        Command::CheckTheorem(a) => run(a, None, Some(TaskKind::Theorem), None),
        Command::Suite { name, args } => run(args, name.as_deref(), None, None),
        Command::List => {
            list();
            Ok(true)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
