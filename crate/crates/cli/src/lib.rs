//! Batch driver for the okounkov library.
//!
//! Each subcommand reads one JSON problem file, runs a pipeline and writes a
//! JSON report (stdout unless `--out` is given). Exact quantities are
//! serialized as `"p/q"` strings; floating point values only appear in fields
//! whose names end in `_float`.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 resource cap hit,
//! 4 verdict failure (a checked inequality or count disagreed).

pub mod commands;
pub mod problem;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use okounkov::laurent::DEFAULT_DIMENSION_CAP;
use okounkov::lattice::DEFAULT_POINT_CAP;

pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_RESOURCE_CAP: i32 = 3;
pub const EXIT_VERDICT: i32 = 4;

pub const DEFAULT_D_MAX: usize = 16;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    ResourceCap(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::ResourceCap(_) => EXIT_RESOURCE_CAP,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<okounkov::Error> for CliError {
    fn from(e: okounkov::Error) -> Self {
        if e.is_resource_cap() {
            CliError::ResourceCap(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

#[derive(Debug, Parser)]
#[command(name = "okounkov", version, about = "Newton–Okounkov bodies, Hilbert functions and mixed volumes on small variety models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Args)]
pub struct Input {
    /// JSON problem file.
    pub input: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Newton body of G(L) and the volume/Hilbert consistency verdict.
    Body(Input),
    /// Hilbert function H(d) = dim L^d and its asymptotic fit.
    Hilbert(Input),
    /// Exact mixed volume of n polytopes in R^n.
    Mixedvol(Input),
    /// Bernstein count n!·V(Δ1, ..., Δn) against the resultant oracle.
    Bkk(Input),
    /// Newton segment, gaps and degree identities on a one-parameter model.
    Curve(Input),
    /// Randomized Alexandrov–Fenchel, Brunn–Minkowski and cube-count suite.
    Inequalities(Input),
    /// Truncated SAGBI check and subduction data.
    Sagbi(Input),
    /// Lattice points of λ·P against λ^n·Vol(P).
    Lattice(Input),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Body(_) => "body",
            Command::Hilbert(_) => "hilbert",
            Command::Mixedvol(_) => "mixedvol",
            Command::Bkk(_) => "bkk",
            Command::Curve(_) => "curve",
            Command::Inequalities(_) => "inequalities",
            Command::Sagbi(_) => "sagbi",
            Command::Lattice(_) => "lattice",
        }
    }

    fn input(&self) -> &Path {
        match self {
            Command::Body(i)
            | Command::Hilbert(i)
            | Command::Mixedvol(i)
            | Command::Bkk(i)
            | Command::Curve(i)
            | Command::Inequalities(i)
            | Command::Sagbi(i)
            | Command::Lattice(i) => &i.input,
        }
    }
}

#[derive(Debug, Args)]
pub struct Flags {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write CSV tables (2D vertices, H(d)) into this directory.
    #[arg(long, global = true)]
    pub emit_csv: Option<PathBuf>,
    /// Override the problem's d_max.
    #[arg(long, global = true)]
    pub dmax: Option<usize>,
    /// Override the problem's seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for sample-parallel suites.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Cap on enumerated lattice points.
    #[arg(long, global = true)]
    pub cap_points: Option<u128>,
    /// Cap on dim L^d.
    #[arg(long, global = true)]
    pub cap_dim: Option<usize>,
}

/// Problem-independent settings after applying flags and defaults.
#[derive(Clone, Debug)]
pub struct Settings {
    pub d_max: usize,
    pub seed: u64,
    pub cap_points: u128,
    pub cap_dim: usize,
}

impl Settings {
    pub fn resolve(flags: &Flags, problem: &problem::ProblemFile) -> Self {
        Settings {
            d_max: flags.dmax.or(problem.d_max).unwrap_or(DEFAULT_D_MAX),
            seed: flags.seed.or(problem.seed).unwrap_or(0),
            cap_points: flags.cap_points.unwrap_or(DEFAULT_POINT_CAP),
            cap_dim: flags.cap_dim.unwrap_or(DEFAULT_DIMENSION_CAP),
        }
    }
}

/// Parses, dispatches and writes outputs; returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let outcome = execute(cli);
    if let Err(e) = &outcome {
        eprintln!("error: {e}");
    }
    exit_code(&outcome)
}

/// Ok(passed) or the error of a run, as a process exit code.
pub fn exit_code(outcome: &Result<bool, CliError>) -> i32 {
    match outcome {
        Ok(true) => 0,
        Ok(false) => EXIT_VERDICT,
        Err(e) => e.exit_code(),
    }
}

fn execute(cli: &Cli) -> Result<bool, CliError> {
    if let Some(n) = cli.flags.threads {
        if n == 0 {
            return Err(CliError::Validation("--threads must be positive".into()));
        }
        // a second initialization in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let path = cli.command.input();
    let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
    let problem = problem::ProblemFile::parse(&text)?;
    let settings = Settings::resolve(&cli.flags, &problem);
    let output = commands::dispatch(&cli.command, &problem, &settings)?;

    match &cli.flags.out {
        Some(out) => {
            std::fs::write(out, &output.json).map_err(|e| io_error(out, e))?;
            println!("{}", output.summary);
        }
        None => print!("{}", output.json),
    }
    if let Some(dir) = &cli.flags.emit_csv {
        std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        for table in &output.tables {
            let path = dir.join(format!("{}.csv", table.name));
            table.write(&path).map_err(|e| io_error(&path, e))?;
        }
    }
    if !output.passed {
        eprintln!("verdict failure: {}", output.summary);
    }
    Ok(output.passed)
}
