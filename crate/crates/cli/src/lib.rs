//! Command-line driver: reads a JSON run configuration, runs one operation
//! and writes a JSON report.
//!
//! Exit codes: 0 success, 1 configuration or I/O error, 2 invalid group,
//! 3 numeric error (recorded in the report).

pub mod commands;
pub mod config;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::Failure;
use config::RunConfig;
use report::{to_value, ErrorObject, Report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

#[derive(Debug, Parser)]
#[command(name = "schottky", version = report::VERSION, about = "Schottky group series, forms and pairings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

/// Flags override the config; the merged result is echoed in the report.
#[derive(Debug, Default, clap::Args)]
pub struct Flags {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub max_len: Option<usize>,
    #[arg(long, global = true)]
    pub conj_depth: Option<usize>,
    #[arg(long, global = true)]
    pub coset_depth: Option<usize>,
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Report path; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// CSV path for point clouds.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check the Schottky conditions.
    Validate,
    /// Count reduced words up to `max_len`.
    Words,
    /// Cross-ratio series for `points.{y,q,x,p}`.
    Green,
    /// W-product of `divisors.d` at `points.r` with base `points.base`.
    Wprod,
    /// Period-coefficient matrix for `points.x`, `points.y`.
    Xmatrix,
    /// Assembled one-form for `points.x − points.y`, evaluated at `points.z`.
    Omega,
    /// Periods of the assembled one-form around every `D_k`.
    Periods,
    /// Critical-exponent estimate.
    Delta,
    /// Nested-disk approximation of the limit set.
    Limits,
    /// Height pairing of `divisors.a` and `divisors.b`.
    Pairing,
    /// Monte Carlo double integral for `points.x`, `points.y`.
    DoubleIntegral,
    /// Scan along `path`.
    Deform,
    /// Split of the cross-ratio series by distance to the limit set.
    Split,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Words => "words",
            Command::Green => "green",
            Command::Wprod => "wprod",
            Command::Xmatrix => "xmatrix",
            Command::Omega => "omega",
            Command::Periods => "periods",
            Command::Delta => "delta",
            Command::Limits => "limits",
            Command::Pairing => "pairing",
            Command::DoubleIntegral => "double-integral",
            Command::Deform => "deform",
            Command::Split => "split",
        }
    }
}

pub mod exit {
    pub const OK: u8 = 0;
    pub const CONFIG: u8 = 1;
    pub const INVALID_GROUP: u8 = 2;
    pub const NUMERIC: u8 = 3;
}

/// Loads the config and merges environment and flags into it.
pub fn resolve_config(flags: &Flags) -> Result<RunConfig, CliError> {
    let path = flags
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config PATH is required".into()))?;
    let mut cfg = RunConfig::load(path)?;
    cfg.apply_env()?;
    let f = flags;
    if let Some(v) = f.max_len {
        cfg.max_len = v;
    }
    if let Some(v) = f.conj_depth {
        cfg.conj_depth = v;
    }
    if let Some(v) = f.coset_depth {
        cfg.coset_depth = v;
    }
    if let Some(v) = f.tol {
        cfg.tol = v;
    }
    if let Some(v) = f.seed {
        cfg.seed = v;
    }
    if let Some(v) = f.samples {
        cfg.samples = v;
    }
    if f.threads.is_some() {
        cfg.threads = f.threads;
    }
    if f.out.is_some() {
        cfg.out = f.out.clone();
    }
    if f.csv.is_some() {
        cfg.csv = f.csv.clone();
    }
    Ok(cfg)
}

/// Runs one command and returns the process exit code.
pub fn run(cli: &Cli) -> u8 {
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("schottky: {e}");
            exit::CONFIG
        }
    }
}

fn execute(cli: &Cli) -> Result<u8, CliError> {
    let cfg = resolve_config(&cli.flags)?;
    if let Some(n) = cfg.threads {
        if n == 0 {
            return Err(CliError::Config("threads must be at least 1".into()));
        }
        // A second initialisation only fails when a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let command = cli.command;
    let mut report = Report::new(command.name(), cfg.clone());
    let out = cfg.out.clone();

    let code = match cfg.build_group() {
        Err(e) => {
            report.errors.push(ErrorObject::from(&e));
            exit::INVALID_GROUP
        }
        Ok(group) => {
            let validation = group.validate();
            if command == Command::Validate {
                report.result = to_value(&validation);
                if validation.valid {
                    exit::OK
                } else {
                    exit::INVALID_GROUP
                }
            } else if !validation.valid {
                let e = schottky::Error::InvalidGroup(validation.problems.join("; "));
                report.errors.push(ErrorObject::from(&e));
                report.result = to_value(&validation);
                exit::INVALID_GROUP
            } else {
                match commands::run(command, &cfg, &group, &mut report) {
                    Ok(()) => exit::OK,
                    Err(Failure::Config(e)) => return Err(e),
                    Err(Failure::Numeric(e)) => {
                        report.errors.push(ErrorObject::from(&e));
                        exit::NUMERIC
                    }
                }
            }
        }
    };
    report.write(out.as_deref())?;
    Ok(code)
}
