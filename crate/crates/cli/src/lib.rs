//! JSON front end for the `torricelli` binary: input files, reports, and the
//! five commands.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use config::{ConfigFile, Coords, Dimension, FileOptions, LoadedConfig, PointEntry, Problem};
pub use report::{BalanceRecord, ClassifyReport, OracleCompareReport, OutcomeRecord, ReportFile};

/// Process exit codes; no others are ever emitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    InputError = 1,
    NotConverged = 2,
    Failed = 3,
    DegenerateProbe = 4,
}

impl Exit {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{field}: {message}")]
    Input { field: String, message: String },
    #[error("--at: probe coincides with anchor {index}")]
    DegenerateProbe { index: usize },
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Io { .. } | CliError::Input { .. } => Exit::InputError,
            CliError::DegenerateProbe { .. } => Exit::DegenerateProbe,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "torricelli",
    version,
    about = "Weighted Fermat-Torricelli point solver"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Configuration file (JSON)
    pub input: PathBuf,
    /// Residual tolerance relative to the total weight [default: 1e-9]
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Iteration cap [default: 10000]
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
    /// Write the report here instead of standard output
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve and write a report
    Solve(SolveArgs),
    /// Evaluate the balance certificates at a point
    Verify {
        input: PathBuf,
        /// Probe point, comma-separated (x,y or x,y,z; unit 3-vector on the sphere)
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        /// Pass threshold relative to the total weight [default: 1e-8]
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Report the absorption test for every anchor
    Classify {
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Solve a configuration on the unit sphere
    SphereSolve(SolveArgs),
    /// Cross-check the solver against a grid search
    OracleCompare {
        #[command(flatten)]
        solve: SolveArgs,
        #[arg(long, default_value_t = 6)]
        levels: usize,
        #[arg(long = "per-level", default_value_t = 16)]
        per_level: usize,
    },
}

/// Parses `args`, runs the command, and writes the report and diagnostics.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write, color: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind::*;
            return match e.kind() {
                DisplayHelp | DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    Exit::Success.code()
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    Exit::InputError.code()
                }
            };
        }
    };
    let (output_path, result) = commands::dispatch(&cli.command);
    let outcome = result.and_then(|(text, exit)| {
        match output_path {
            Some(path) => std::fs::write(path, &text).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?,
            None => {
                let _ = stdout.write_all(text.as_bytes());
            }
        }
        Ok(exit)
    });
    match outcome {
        Ok(exit) => exit.code(),
        Err(e) => {
            let prefix = if color {
                "\x1b[1;31merror\x1b[0m"
            } else {
                "error"
            };
            let _ = writeln!(stderr, "{prefix}: {e}");
            e.exit().code()
        }
    }
}
