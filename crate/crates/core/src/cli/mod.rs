//! Batch front end. A TOML config declares rings, semigroups and modules and
//! lists jobs over them; each job writes a JSON report, a text table and, for
//! quivers, a DOT file. `reproduce-paper` runs the built-in reproduction checks.
//!
//! ```toml
//! [ring.A]
//! vars = ["x0", "x1"]
//!
//! [ring.B]
//! vars = ["u", "v"]
//! weights = [1, 2]
//!
//! [module.omega]
//! a = "A"
//! b = "B"
//! shift = 1
//!
//! [module.omega2]
//! kind = "syzygy"
//! of = "omega"
//! k = 2
//!
//! [semigroup.klein]
//! group = [2, 2]
//! gens = ["1:00", "1:10", "1:01"]
//!
//! [[job]]
//! name = "gw"
//! kind = "segre-report"
//! a = "A"
//! b = "B"
//! shifts = [0, 1]
//! expect = { gorenstein = false }
//! ```

mod cache;
mod config;
mod jobs;
pub mod paper;

pub use cache::{Cache, CACHE_ENV};
pub use config::{Config, Expect, JobDecl, JobKind, ModuleDecl, ModuleKind, RingDecl, SemigroupDecl};
pub use jobs::{run_job, JobOutcome, Session};
pub use paper::{reproduce, Check, PaperReport};

use crate::gradedlin::GradedError;
use crate::hilbert::{FieldSpec, HilbertError};
use crate::kronecker::KroneckerError;
use crate::numsgp::NumSgpError;
use crate::quivers::QuiverError;
use clap::{Parser, Subcommand};
use serde::Serialize;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unresolved reference: {0}")]
    Reference(String),
    #[error("certification gap: {0}")]
    Certification(String),
    #[error("{0}")]
    Compute(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } | CliError::Reference(_) => 2,
            CliError::Certification(_) => 3,
            CliError::Compute(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<GradedError> for CliError {
    fn from(e: GradedError) -> Self {
        match e {
            GradedError::CertificationGap(s) => CliError::Certification(s),
            GradedError::Ring(h) => h.into(),
            e => CliError::Compute(e.to_string()),
        }
    }
}

impl From<HilbertError> for CliError {
    fn from(e: HilbertError) -> Self {
        match e {
            HilbertError::WindowTooSmall { .. } => CliError::Certification(e.to_string()),
            e => CliError::Compute(e.to_string()),
        }
    }
}

impl From<QuiverError> for CliError {
    fn from(e: QuiverError) -> Self {
        match e {
            QuiverError::Certification(s) => CliError::Certification(s),
            e => CliError::Compute(e.to_string()),
        }
    }
}

impl From<NumSgpError> for CliError {
    fn from(e: NumSgpError) -> Self {
        CliError::Compute(e.to_string())
    }
}

impl From<KroneckerError> for CliError {
    fn from(e: KroneckerError) -> Self {
        CliError::Compute(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Options shared by all jobs; a job's own settings take precedence.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Options {
    /// Half-width `D` of the degree window `[-D, D]`.
    pub window: Option<i64>,
    /// Resolution depth.
    pub depth: Option<usize>,
    pub field: FieldSpec,
}

impl Default for Options {
    fn default() -> Self {
        Self { window: None, depth: None, field: FieldSpec::Rational }
    }
}

impl Options {
    pub fn d(&self, default: i64) -> i64 {
        self.window.unwrap_or(default)
    }
}

/// `rational` or `prime:p`.
pub fn parse_field(s: &str) -> std::result::Result<FieldSpec, String> {
    match s.trim() {
        "rational" | "Q" => Ok(FieldSpec::Rational),
        other => {
            let p = other
                .strip_prefix("prime:")
                .ok_or_else(|| format!("unknown field {other:?}; use rational or prime:p"))?;
            let p: u32 = p.parse().map_err(|_| format!("bad prime {p:?}"))?;
            if p < 2 || (2..p).take_while(|q| q * q <= p).any(|q| p.is_multiple_of(q)) {
                return Err(format!("{p} is not prime"));
            }
            if p > 46_337 {
                return Err(format!("prime {p} is too large"));
            }
            Ok(FieldSpec::Prime(p))
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "gradedcm", version, about = "Graded Cohen-Macaulay computations over Segre products")]
pub struct Cli {
    /// Config file with ring, semigroup, module and job declarations.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory for artifacts.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Degree window half-width D, used as [-D, D].
    #[arg(long, global = true)]
    pub window: Option<i64>,
    /// Resolution depth.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    #[arg(long, global = true, default_value = "rational", value_parser = parse_field)]
    pub field: FieldSpec,
    /// Worker threads for --parallel.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Per-degree parallelism inside the linear algebra.
    #[arg(long, global = true)]
    pub parallel: bool,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run jobs from --config (all of them unless --job is given).
    Run {
        #[arg(long = "job")]
        select: Vec<String>,
    },
    /// Run the built-in reproduction checks.
    ReproducePaper {
        #[arg(long)]
        section: Option<u32>,
    },
    /// Report on an extended numerical semigroup.
    Numsgp {
        /// Cyclic orders, e.g. `2,2`.
        #[arg(long)]
        group: String,
        /// Generators `n:label`, e.g. `1:00,1:10`.
        #[arg(long)]
        gens: Option<String>,
        /// Gaps `n:label`; used instead of generators.
        #[arg(long)]
        gaps: Option<String>,
    },
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            if e.exit_code() == 2 {
                use clap::CommandFactory;
                eprintln!("{}", Cli::command().render_usage());
            }
            e.exit_code()
        }
    }
}

/// Runs the parsed command; `Ok(false)` means a check failed.
pub fn execute(cli: &Cli) -> Result<bool> {
    crate::gradedlin::set_parallel(cli.parallel);
    if let Some(n) = cli.jobs {
        // a second call in the same process keeps the first pool
        let _ = rayon_threads(n);
    }
    let opts = Options { window: cli.window, depth: cli.depth, field: cli.field };
    if let Some(d) = opts.window {
        if !(1..=12).contains(&d) {
            return Err(CliError::Usage(format!("--window {d} outside 1..=12")));
        }
    }
    if let Some(d) = opts.depth {
        if !(1..=6).contains(&d) {
            return Err(CliError::Usage(format!("--depth {d} outside 1..=6")));
        }
    }
    match (&cli.command, &cli.config) {
        (Some(Command::ReproducePaper { section }), _) => {
            let report = reproduce(*section, &opts)?;
            print!("{}", report.text());
            write_artifact(&cli.out, "reproduce-paper.json", &report.to_json_string())?;
            Ok(report.passed)
        }
        (Some(Command::Numsgp { group, gens, gaps }), _) => {
            let (report, text) = jobs::numsgp_from_strings(group, gens.as_deref(), gaps.as_deref(), &opts)?;
            print!("{text}");
            write_artifact(&cli.out, "numsgp.json", &pretty(&report))?;
            Ok(true)
        }
        (Some(Command::Run { select }), Some(path)) => run_config(path, select, &opts, &cli.out),
        (None, Some(path)) => run_config(path, &[], &opts, &cli.out),
        (Some(Command::Run { .. }), None) => Err(CliError::Usage("run needs --config".into())),
        (None, None) => Err(CliError::Usage("nothing to do: give a subcommand or --config".into())),
    }
}

#[cfg(feature = "parallel")]
fn rayon_threads(n: usize) -> std::result::Result<(), String> {
    rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global().map_err(|e| e.to_string())
}

#[cfg(not(feature = "parallel"))]
fn rayon_threads(_: usize) -> std::result::Result<(), String> {
    Ok(())
}

fn run_config(path: &Path, select: &[String], opts: &Options, out: &Path) -> Result<bool> {
    let text = std::fs::read_to_string(path)?;
    let config = Config::parse(&text)?;
    let jobs: Vec<&JobDecl> =
        config.job.iter().filter(|j| select.is_empty() || select.contains(&j.name)).collect();
    if jobs.is_empty() {
        return Err(CliError::Usage("the job list is empty".into()));
    }
    let mut session = Session::new(&config, opts.clone(), Cache::from_env());
    let mut all = true;
    let mut summary = Vec::new();
    for job in jobs {
        let outcome = run_job(&mut session, job)?;
        println!("== {} ({}) {}", outcome.name, outcome.kind, if outcome.passed { "pass" } else { "FAIL" });
        print!("{}", outcome.text);
        write_artifact(out, &format!("{}.json", outcome.name), &pretty(&outcome.report))?;
        write_artifact(out, &format!("{}.txt", outcome.name), &outcome.text)?;
        if let Some(dot) = &outcome.dot {
            write_artifact(out, &format!("{}.dot", outcome.name), dot)?;
        }
        summary.push(serde_json::json!({"name": outcome.name, "kind": outcome.kind, "passed": outcome.passed, "window": outcome.window}));
        all &= outcome.passed;
    }
    write_artifact(out, "summary.json", &pretty(&serde_json::json!({"jobs": summary, "passed": all})))?;
    Ok(all)
}

pub(crate) fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn write_artifact(dir: &Path, name: &str, body: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), body)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_parsing() {
        assert_eq!(parse_field("rational"), Ok(FieldSpec::Rational));
        assert_eq!(parse_field("prime:7"), Ok(FieldSpec::Prime(7)));
        assert!(parse_field("prime:8").is_err());
        assert!(parse_field("prime:1").is_err());
        assert!(parse_field("reals").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(main_with_args(["gradedcm"]), 2);
        assert_eq!(main_with_args(["gradedcm", "--window", "x"]), 2);
        assert_eq!(CliError::Certification("x".into()).exit_code(), 3);
        assert_eq!(CliError::Parse { line: 1, col: 1, msg: String::new() }.exit_code(), 2);
        assert_eq!(CliError::from(GradedError::CertificationGap("t".into())).exit_code(), 3);
    }
}
