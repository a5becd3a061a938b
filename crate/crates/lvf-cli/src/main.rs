//! `lvf` — command-line driver for the verification workbench.
//!
//! `verify <suite>` runs one named suite and emits its canonical JSON
//! report (stdout, or `--out <path>`), with a human summary on stderr;
//! the exit code is 0 exactly when every non-skipped check passed.
//! `compute <what>` prints a single object — a derivative matrix, the
//! differential-operator or isometry-algebra image of an expression, or
//! a cocycle table — in canonical text form. `list-suites` enumerates
//! the available suites. Flags override a TOML config file (`--config`,
//! falling back to `$LVF_CONFIG`), which overrides built-in defaults.

mod config;
mod ops;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use lvf_core::report::{Report, Status};
use lvf_core::suites::{run_suite, suite_names, SuiteConfig};

#[derive(Parser)]
#[command(name = "lvf", version, about = "Verification workbench for linear-vector-field realizations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and emit its report.
    Verify(VerifyArgs),
    /// Print one computed object in canonical text form.
    #[command(subcommand)]
    Compute(ComputeCmd),
    /// List the available verification suites.
    ListSuites,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name; see `lvf list-suites`.
    suite: String,
    /// Seed for the suite's random instances.
    #[arg(long)]
    seed: Option<u64>,
    /// Index-window size knob.
    #[arg(long)]
    window: Option<i64>,
    /// Number of random instances.
    #[arg(long)]
    instances: Option<usize>,
    /// Branch count for filter-bank checks.
    #[arg(long)]
    n: Option<usize>,
    /// Largest monomial degree exercised by isometry-relation checks.
    #[arg(long)]
    max_exp: Option<i64>,
    /// Node count for quadrature cross-checks.
    #[arg(long)]
    quadrature_nodes: Option<usize>,
    /// Flow time; accepts a float or an exact rational like "1/20".
    #[arg(long)]
    flow_time: Option<String>,
    /// Flow comparison tolerance; float or exact rational.
    #[arg(long)]
    flow_tolerance: Option<String>,
    /// Config file; defaults to $LVF_CONFIG when set.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ComputeCmd {
    /// Derivative pairing matrix of a named vector field basis.
    DMatrix {
        /// Field basis: x2dx, monomial, or circle.
        #[arg(long)]
        basis: String,
        /// Largest mode index in the table.
        #[arg(long, default_value_t = 4)]
        window: i64,
        /// Degree parameter for the monomial and circle bases.
        #[arg(long, default_value_t = 1)]
        n: i64,
        /// Also write the table to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Normally ordered differential-operator image of an expression.
    WeylElement {
        /// Expression over D(Eij), del(ek), delbar(ek), e.g. "D(E12)".
        #[arg(long)]
        op: String,
        /// Also write the element to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Isometry-algebra image of an expression.
    CuntzElement {
        /// Expression over D(Eij), del(ek), delbar(ek), e.g. "D(E12)".
        #[arg(long)]
        op: String,
        /// Also write the element to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Table of the 2-cocycle phi_u(w, z) over an algebra basis.
    CocycleTable {
        /// Algebra: sl2 or solvable4.
        #[arg(long)]
        algebra: String,
        /// Basis label of u (e.g. h for sl2, x for solvable4).
        #[arg(long)]
        u: String,
        /// Weight degree defining the trace functional.
        #[arg(long, default_value_t = 2)]
        degree: u32,
        /// solvable4 structure parameter, an exact rational.
        #[arg(long)]
        alpha: Option<String>,
        /// solvable4 structure parameter, an exact rational.
        #[arg(long)]
        beta: Option<String>,
        /// Also write the table to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Verify(args) => verify(args),
        Command::Compute(cmd) => compute(cmd),
        Command::ListSuites => {
            for name in suite_names() {
                println!("{name}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    if !suite_names().contains(&args.suite.as_str()) {
        bail!("unknown suite `{}`; run `lvf list-suites` for the available names", args.suite);
    }
    let mut cfg = SuiteConfig::default_for(&args.suite);
    config::apply_file(&mut cfg, args.config.as_deref())?;
    apply_flags(&args, &mut cfg)?;
    let report = run_suite(&cfg)?;
    let json = report.to_json();
    match &args.out {
        Some(path) => std::fs::write(path, format!("{json}\n"))
            .with_context(|| format!("cannot write report to {}", path.display()))?,
        None => println!("{json}"),
    }
    summarize(&report);
    Ok(if report.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

/// Command-line flags take precedence over config-file values.
fn apply_flags(args: &VerifyArgs, cfg: &mut SuiteConfig) -> Result<()> {
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.window {
        cfg.window = v;
    }
    if let Some(v) = args.instances {
        cfg.instances = v;
    }
    if let Some(v) = args.n {
        cfg.n = v;
    }
    if let Some(v) = args.max_exp {
        cfg.max_exp = v;
    }
    if let Some(v) = args.quadrature_nodes {
        cfg.quadrature_nodes = v;
    }
    if let Some(s) = &args.flow_time {
        cfg.flow_time = config::parse_number(s)?;
    }
    if let Some(s) = &args.flow_tolerance {
        cfg.flow_tolerance = config::parse_number(s)?;
    }
    Ok(())
}

/// Human-readable digest on stderr; the JSON report stays machine-clean.
fn summarize(report: &Report) {
    let mut passed = 0usize;
    let mut failed = 0usize;
    let mut skipped = 0usize;
    for check in &report.checks {
        match &check.status {
            Status::Pass => passed += 1,
            Status::Fail => {
                failed += 1;
                let witness = check.witness.as_deref().unwrap_or("no witness recorded");
                eprintln!("FAIL {}: {}", check.name, witness);
            }
            Status::Skipped(reason) => {
                skipped += 1;
                eprintln!("SKIP {}: {}", check.name, reason);
            }
        }
    }
    eprintln!(
        "suite {}: {} passed, {} failed, {} skipped (seed {})",
        report.suite, passed, failed, skipped, report.seed
    );
}

fn compute(cmd: ComputeCmd) -> Result<ExitCode> {
    let (text, out) = match cmd {
        ComputeCmd::DMatrix { basis, window, n, out } => {
            (ops::d_matrix_table(&basis, window, n)?.trim_end().to_string(), out)
        }
        ComputeCmd::WeylElement { op, out } => (ops::weyl_element(&op)?.to_string(), out),
        ComputeCmd::CuntzElement { op, out } => (ops::cuntz_element(&op)?.to_string(), out),
        ComputeCmd::CocycleTable { algebra, u, degree, alpha, beta, out } => (
            ops::cocycle_table(&algebra, &u, degree, alpha.as_deref(), beta.as_deref())?
                .trim_end()
                .to_string(),
            out,
        ),
    };
    println!("{text}");
    if let Some(path) = out {
        std::fs::write(&path, format!("{text}\n"))
            .with_context(|| format!("cannot write output to {}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}
