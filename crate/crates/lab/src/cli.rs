//! Command-line front end. Exit codes: 0 success, 1 numerical or I/O
//! failure, 2 usage error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use chrono::Utc;
use clap::{Args, Parser, Subcommand};
use rmt_core::par::{with_thread_cap, Execution};

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::LabError;
use crate::experiments::run;
use crate::output::{write_run, RunTimes};
use crate::presets::{preset, PRESET_NAMES};

/// Caps the worker pool when set to a positive integer.
pub const THREADS_ENV: &str = "RMT_LAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "rmt-lab",
    version,
    about = "Seeded random-matrix experiments with CSV and JSON output"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Eigenvalues of a perturbed product with reference points.
    Spectrum(RunArgs),
    /// Predicted versus observed outliers.
    Outliers(RunArgs),
    /// Isotropic resolvent deviations on an annulus grid.
    Isotropic(RunArgs),
    /// Least singular values and resolvent norms on an annulus grid.
    Lsv(RunArgs),
    /// Exact path-graph moments and per-class tables.
    Moments(RunArgs),
    /// Radial CDF against the limit law.
    Radial(RunArgs),
    /// Block-cycle linearization check.
    Linearize(RunArgs),
    /// List preset names.
    Presets,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// JSON configuration file.
    #[arg(long, value_name = "PATH", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Named preset (see `rmt-lab presets`).
    #[arg(long)]
    preset: Option<String>,
    /// Override the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory; defaults to the config's output_path, then `out/<experiment>`.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Override the configured number of trials.
    #[arg(long)]
    trials: Option<usize>,
    /// Run every work item on the calling thread.
    #[arg(long)]
    sequential: bool,
}

fn thread_cap() -> Result<Option<usize>, LabError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&t| t > 0)
            .map(Some)
            .ok_or_else(|| LabError::Usage(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
    }
}

fn resolve(kind: ExperimentKind, args: &RunArgs) -> Result<ExperimentConfig, LabError> {
    let mut config = match (&args.config, &args.preset) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| LabError::Usage(format!("cannot read {}: {e}", path.display())))?;
            ExperimentConfig::from_json(&text)?
        }
        (None, Some(name)) => preset(name)
            .ok_or_else(|| LabError::Usage(format!("unknown preset {name:?}; known: {}", PRESET_NAMES.join(", "))))?,
        (None, None) => return Err(LabError::Usage("pass --config PATH or --preset NAME".into())),
    };
    if config.experiment != kind {
        return Err(LabError::Usage(format!(
            "config is for the {} experiment, not {kind}",
            config.experiment
        )));
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(trials) = args.trials {
        config.trials = trials;
    }
    if let Some(out) = &args.out {
        config.output_path = Some(out.clone());
    }
    config.validate()?;
    Ok(config)
}

/// Runs a resolved config and writes its outputs; returns the summary.
pub fn execute(config: &ExperimentConfig, execution: Execution) -> Result<serde_json::Value, LabError> {
    let started = Utc::now();
    let output = run(config, execution)?;
    let finished = Utc::now();
    let default_dir = PathBuf::from("out").join(config.experiment.name());
    let dir: &Path = config.output_path.as_deref().unwrap_or(&default_dir);
    write_run(dir, config, &output, RunTimes { started, finished })
}

fn dispatch(command: Command) -> Result<(), LabError> {
    let (kind, args) = match command {
        Command::Presets => {
            for name in PRESET_NAMES {
                let cfg = preset(name).expect("listed preset exists");
                println!("{name}\t{}", cfg.experiment);
            }
            return Ok(());
        }
        Command::Spectrum(a) => (ExperimentKind::Spectrum, a),
        Command::Outliers(a) => (ExperimentKind::Outliers, a),
        Command::Isotropic(a) => (ExperimentKind::Isotropic, a),
        Command::Lsv(a) => (ExperimentKind::Lsv, a),
        Command::Moments(a) => (ExperimentKind::Moments, a),
        Command::Radial(a) => (ExperimentKind::Radial, a),
        Command::Linearize(a) => (ExperimentKind::Linearize, a),
    };
    let config = resolve(kind, &args)?;
    let execution = if args.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let cap = thread_cap()?;
    let summary = with_thread_cap(cap, || execute(&config, execution))?;
    println!(
        "{}",
        serde_json::to_string_pretty(&summary["metrics"]).expect("metrics serialize")
    );
    Ok(())
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("rmt-lab: {e}");
            e.exit_code()
        }
    }
}

pub fn main() -> i32 {
    main_with(std::env::args_os())
}
