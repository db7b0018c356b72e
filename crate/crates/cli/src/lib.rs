//! `dgw`: runs the verification suites and checks JSON inputs.
//!
//! Exit codes: 0 when every case passes, 1 when any case fails, 2 on
//! usage or input errors.

pub mod config;
pub mod inputs;
pub mod report;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use dgw::exactlin::Ring;

pub use config::{Suite, SuiteConfig};
pub use report::{Case, Report};
pub use suites::run_suite;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: malformed JSON at line {line}, column {column}: {msg}")]
    Json { path: String, line: usize, column: usize, msg: String },
    #[error("{0}")]
    Input(String),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
}

#[derive(Parser, Debug)]
#[command(name = "dgw", version, about = "Exact verification suites for differential graded constructions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Hurewicz factorizations, lifting, 2-of-6 and Künneth.
    Wfs(SuiteArgs),
    /// Bar and cobar replacements and the two-sided bar construction.
    Barcobar(SuiteArgs),
    /// Distributive-law diagrams for the comodule-algebra and Reedy laws.
    Distlaw(SuiteArgs),
    /// The bialgebra counterexample obstruction.
    Counterexample {
        #[command(flatten)]
        args: SuiteArgs,
        /// Degree of the generator `x`; even and at least 2.
        #[arg(long)]
        m: Option<i64>,
    },
    /// Latching and matching objects, the exact square, Reedy classes.
    Reedy(SuiteArgs),
    /// Homology of a chain complex given as JSON.
    Homology {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks a JSON complex, chain map, algebra presentation, coalgebra or Reedy category.
    Validate { file: PathBuf },
}

#[derive(Args, Debug, Default)]
struct SuiteArgs {
    /// Coefficient rings, e.g. `F3` or `F2,F3,F5`.
    #[arg(long, value_delimiter = ',')]
    ring: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    cases: Option<usize>,
    #[arg(long)]
    max_rank: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    deg_lo: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    deg_hi: Option<i64>,
    #[arg(long)]
    max_weight: Option<usize>,
    /// Restricts the suite to some of its checks.
    #[arg(long, value_delimiter = ',')]
    check: Vec<String>,
    /// Writes the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var("DGW_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!("DGW_THREADS must be a positive integer, got {s:?}"))),
        },
    }
}

fn resolve(suite: Suite, a: SuiteArgs, m: Option<i64>) -> Result<(SuiteConfig, Option<PathBuf>), CliError> {
    let mut c = SuiteConfig::defaults(suite);
    if !a.ring.is_empty() {
        c.rings = a.ring.iter().map(|s| Ring::parse(s).map_err(|e| CliError::Usage(e.to_string()))).collect::<Result<_, _>>()?;
    }
    if !a.check.is_empty() {
        c.checks = a.check;
    }
    c.seed = a.seed.unwrap_or(c.seed);
    c.cases = a.cases.or(c.cases);
    c.max_rank = a.max_rank.unwrap_or(c.max_rank);
    c.deg_lo = a.deg_lo.unwrap_or(c.deg_lo);
    c.deg_hi = a.deg_hi.unwrap_or(c.deg_hi);
    c.max_weight = a.max_weight.unwrap_or(c.max_weight);
    c.m = m.unwrap_or(c.m);
    c.threads = threads_from_env()?;
    c.validate()?;
    Ok((c, a.out))
}

fn write_file(path: &PathBuf, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::Io { path: path.display().to_string(), msg: e.to_string() })
}

fn execute(cmd: Cmd, out: &mut dyn Write) -> Result<i32, CliError> {
    let (suite, args, m) = match cmd {
        Cmd::Wfs(a) => (Suite::Wfs, a, None),
        Cmd::Barcobar(a) => (Suite::Barcobar, a, None),
        Cmd::Distlaw(a) => (Suite::Distlaw, a, None),
        Cmd::Counterexample { args, m } => (Suite::Counterexample, args, m),
        Cmd::Reedy(a) => (Suite::Reedy, a, None),
        Cmd::Homology { file, out: path } => {
            let v = inputs::homology_report(&inputs::load_json(&file)?)?;
            let mut bytes = serde_json::to_string_pretty(&v).expect("serializable").into_bytes();
            bytes.push(b'\n');
            if let Some(p) = path {
                write_file(&p, &bytes)?;
            }
            let _ = out.write_all(&bytes);
            return Ok(0);
        }
        Cmd::Validate { file } => {
            let (kind, res) = inputs::validate(&inputs::load_json(&file)?);
            return match res {
                Ok(()) => {
                    let _ = writeln!(out, "valid {kind}");
                    Ok(0)
                }
                Err(e) => Err(CliError::Input(format!("invalid {kind}: {e}"))),
            };
        }
    };
    let (cfg, path) = resolve(suite, args, m)?;
    let start = Instant::now();
    let report = run_suite(&cfg)?;
    let secs = start.elapsed().as_secs_f64();
    if let Some(p) = path {
        write_file(&p, &report.to_bytes())?;
    }
    let _ = write!(out, "{}", report.summary());
    let _ = writeln!(out, "  wall time {secs:.2} s");
    Ok(if report.pass() { 0 } else { 1 })
}

/// Parses `argv` (including the program name), runs, and returns the exit code.
pub fn run_to<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(out, "{}", e.render()) } else { write!(err, "{}", e.render()) };
            return code;
        }
    };
    match execute(cli.cmd, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_to(argv, &mut std::io::stdout(), &mut std::io::stderr())
}
