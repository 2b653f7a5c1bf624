// SPDX-License-Identifier: MIT OR Apache-2.0
//! Command-line orchestration for the `endlam` toolkit.
//!
//! The binary is a thin shell around [`run`], which parses arguments,
//! executes one subcommand and returns the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, every assertion of the subcommand holds |
//! | 1 | some assertion fails; the report is still written |
//! | 2 | usage error (unknown flag, malformed value) or domain error (e.g. even `p`) |
//!
//! Every subcommand writes its primary artifact to `--out` (or a per-command
//! default) and a manifest `<out>.manifest.json` recording the tool version,
//! the subcommand and its arguments, the constants, the oracle cap and the
//! SHA-256 of every input and output file.  Nothing time- or host-dependent is
//! recorded and all parallel work is collected in a fixed order, so two runs
//! with identical manifests produce byte-identical outputs.
//!
//! All numbers in reports are exact — decimal strings for integers and
//! `num/den` for rationals — except the modeled lengths of `limit-trace`,
//! which are floats printed with 15 significant digits.

mod commands;
pub mod config;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{parse_constants, RunConstants};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Errors that abort a run with exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed arguments or configuration.
    #[error("usage: {0}")]
    Usage(String),
    /// The library rejected the request.
    #[error(transparent)]
    Domain(#[from] endlam::Error),
    /// A file could not be read or written.
    #[error("{path}: {source}")]
    Io {
        /// Offending path.
        path: PathBuf,
        /// Underlying error.
        source: std::io::Error,
    },
    /// CSV input or output failed.
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

/// Exact toolkit for twist-and-rotate curve sequences on punctured spheres.
#[derive(Debug, Parser)]
#[command(name = "endlam", version, about)]
pub struct Cli {
    /// Constants file: `key = value` lines with keys B0, G0 and delta.
    #[arg(long, global = true, value_name = "FILE")]
    pub constants: Option<PathBuf>,
    /// Cap on side points per chord representative for brute-force methods.
    #[arg(long, global = true, value_name = "N")]
    pub oracle_cap: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    /// Primary output file.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Subcommand.
    #[command(subcommand)]
    pub command: Command,
}

/// The subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a twist-and-rotate sequence and save it as JSON.
    Build(BuildArgs),
    /// Verify every clause of condition P on a saved sequence.
    VerifyP(SeqArgs),
    /// Intersection numbers between sequence curves.
    Intersections(PairArgs),
    /// Annular projection coefficients d_{γ_k}(γ_i, γ_j).
    Annular(AnnularArgs),
    /// Certified curve-complex distance bounds.
    Distance(DistanceArgs),
    /// Twist-product asymptotics, ergodic proxies and singularity statistics.
    Ergodic(ErgodicArgs),
    /// Modeled length trace through the simplex of limit measures.
    LimitTrace(TraceArgs),
}

/// Arguments of `build`.
#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Puncture count (odd, at least 5).
    #[arg(long)]
    pub p: usize,
    /// First twist exponent e_0.
    #[arg(long)]
    pub e0: String,
    /// Growth ratio a (integer or `num/den`).
    #[arg(long)]
    pub ratio: String,
    /// Depth d: the curves γ_0, …, γ_d are built.
    #[arg(long)]
    pub depth: usize,
}

/// A saved sequence.
#[derive(Debug, Args)]
pub struct SeqArgs {
    /// Sequence JSON written by `build`.
    #[arg(long, value_name = "FILE")]
    pub seq: PathBuf,
}

/// Arguments of `intersections`.
#[derive(Debug, Args)]
pub struct PairArgs {
    #[command(flatten)]
    pub seq: SeqArgs,
    /// Flat list of index pairs `i,j,i,j,…`.
    #[arg(long, value_delimiter = ',', conflicts_with = "all")]
    pub pairs: Vec<usize>,
    /// Every pair `i <= j`.
    #[arg(long)]
    pub all: bool,
}

/// Coefficient method.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Exact when within the oracle cap, estimated otherwise.
    Auto,
    /// Lifting to the annular cover only.
    Exact,
    /// Twist-profile estimator only.
    Estimate,
}

/// Arguments of `annular`.
#[derive(Debug, Args)]
pub struct AnnularArgs {
    #[command(flatten)]
    pub seq: SeqArgs,
    /// CSV with header `i,k,j`; default: every (k−m, k, k+m).
    #[arg(long, value_name = "FILE")]
    pub triples: Option<PathBuf>,
    /// Coefficient method.
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
}

/// Arguments of `distance`.
#[derive(Debug, Args)]
pub struct DistanceArgs {
    #[command(flatten)]
    pub pairs: PairArgs,
    /// Coefficient method for the marker certificates.
    #[arg(long, value_enum, default_value_t = ModeArg::Auto)]
    pub mode: ModeArg,
}

/// Arguments of `ergodic`.
#[derive(Debug, Args)]
pub struct ErgodicArgs {
    #[command(flatten)]
    pub seq: SeqArgs,
    /// Proxy depth K for the singularity statistic (default: deepest possible).
    #[arg(long, value_name = "K")]
    pub proxy_depth: Option<usize>,
}

/// Shrinking schedule of the collar curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EpsArg {
    /// Balanced schedule that sweeps across each simplex edge.
    Edge,
    /// Plain exponential decay L0·exp(−λu).
    Exp,
}

/// Arguments of `limit-trace`.
#[derive(Debug, Args)]
pub struct TraceArgs {
    #[command(flatten)]
    pub seq: SeqArgs,
    /// Samples per edge.
    #[arg(long, default_value_t = 32)]
    pub samples: usize,
    /// Require p = 7 and assert the simplex checks (residual decay, vertex
    /// and edge proximity).
    #[arg(long)]
    pub p7: bool,
    /// Also write the proxy simplex vertices and edge midpoints as CSV.
    #[arg(long, value_name = "PATH")]
    pub emit_edges: Option<PathBuf>,
    /// Bounded pants-curve length L0.
    #[arg(long)]
    pub l0: Option<f64>,
    /// Sweep constant λ.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Collar shrinking schedule.
    #[arg(long, value_enum, default_value_t = EpsArg::Edge)]
    pub eps: EpsArg,
}

/// Everything a subcommand needs besides its own arguments.
pub(crate) struct Context {
    pub constants: RunConstants,
    pub oracle_cap: u64,
    pub out: PathBuf,
    inputs: BTreeMap<String, String>,
}

impl Context {
    /// Read an input file, recording its digest for the manifest.
    pub fn read_input(&mut self, path: &Path) -> Result<Vec<u8>, CliError> {
        let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        self.inputs.insert(path.display().to_string(), sha256_hex(&bytes));
        Ok(bytes)
    }
}

/// What a subcommand produced.
pub(crate) struct Outcome {
    /// Files to write, primary output first.
    pub files: Vec<(PathBuf, Vec<u8>)>,
    /// Whether every assertion holds.
    pub passed: bool,
    /// Human-readable summary lines (stdout).
    pub summary: Vec<String>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    args: Vec<String>,
    constants: RunConstants,
    oracle_cap: u64,
    inputs: &'a BTreeMap<String, String>,
    outputs: BTreeMap<String, String>,
    passed: bool,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn default_out(cmd: &Command) -> &'static str {
    match cmd {
        Command::Build(_) => "seq.json",
        Command::VerifyP(_) => "report.csv",
        Command::Intersections(_) => "table.csv",
        Command::Annular(_) => "annular.csv",
        Command::Distance(_) => "distance.csv",
        Command::Ergodic(_) => "split.csv",
        Command::LimitTrace(_) => "trace.csv",
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Build(_) => "build",
        Command::VerifyP(_) => "verify-p",
        Command::Intersections(_) => "intersections",
        Command::Annular(_) => "annular",
        Command::Distance(_) => "distance",
        Command::Ergodic(_) => "ergodic",
        Command::LimitTrace(_) => "limit-trace",
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn execute(cli: Cli, args: Vec<String>) -> Result<bool, CliError> {
    let constants = match &cli.constants {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            parse_constants(&text)?
        }
        None => RunConstants::default(),
    };
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from(default_out(&cli.command)));
    let mut ctx = Context {
        constants,
        oracle_cap: cli.oracle_cap.unwrap_or(endlam::intersect::DEFAULT_ORACLE_CAP),
        out,
        inputs: BTreeMap::new(),
    };
    if let Some(path) = &cli.constants {
        ctx.read_input(path)?;
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(CliError::Usage("--jobs must be at least 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let outcome = pool.install(|| commands::dispatch(&cli.command, &mut ctx))?;

    let mut outputs = BTreeMap::new();
    for (path, bytes) in &outcome.files {
        write_file(path, bytes)?;
        outputs.insert(path.display().to_string(), sha256_hex(bytes));
    }
    let manifest = Manifest {
        tool: "endlam",
        version: env!("CARGO_PKG_VERSION"),
        command: command_name(&cli.command),
        args,
        constants: ctx.constants,
        oracle_cap: ctx.oracle_cap,
        inputs: &ctx.inputs,
        outputs,
        passed: outcome.passed,
    };
    let mut manifest_path = ctx.out.clone().into_os_string();
    manifest_path.push(".manifest.json");
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    write_file(Path::new(&manifest_path), text.as_bytes())?;
    for line in &outcome.summary {
        println!("{line}");
    }
    Ok(outcome.passed)
}

/// Run the tool on `args` (including the program name) and return the exit
/// code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let recorded = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(cli, recorded) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("endlam: {e}");
            2
        }
    }
}
