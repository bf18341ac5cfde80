//! Command-line front end: `run`, `verify` and `plot-data`.
//!
//! Exit status: 0 on success, 1 on configuration or artifact errors (and on
//! failed verification), 2 when a run stops early on a task it cannot
//! approximate. Partial artifacts are still written in that last case.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::analysis::verify_series;
use crate::artifacts::{read_run, write_plot_data, write_run, write_verification, VERIFICATION_FILE};
use crate::config::RunConfig;
use crate::error::Error;
use crate::exec::Exec;
use crate::schedule::run_forge;

#[derive(Debug, Parser)]
#[command(name = "uniseries", version, about = "Construct and verify universal series")]
pub struct Cli {
    /// Force sequential evaluation even when built with rayon.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the construction described by a TOML config.
    Run { config: PathBuf },
    /// Re-check every ledger entry of a run on a finer grid.
    Verify {
        dir: PathBuf,
        #[arg(long = "density-mult", default_value_t = 1.0)]
        density_mult: f64,
    },
    /// Write plot-ready CSVs under `<dir>/plot`.
    PlotData { dir: PathBuf },
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_APPROXIMATION_FAILED: i32 = 2;

/// Parses `args` (including the program name) and runs the command.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    match cli.command {
        Command::Run { config } => cmd_run(&config, exec),
        Command::Verify { dir, density_mult } => cmd_verify(&dir, density_mult, exec),
        Command::PlotData { dir } => cmd_plot_data(&dir),
    }
}

pub fn cmd_run(config_path: &Path, exec: Exec) -> i32 {
    let cfg = match RunConfig::load(config_path) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    let out = cfg.resolved_output_dir();
    let started = Instant::now();
    let outcome = match cfg.plan(exec).and_then(|plan| run_forge(&plan)) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    let total_ms = started.elapsed().as_secs_f64() * 1e3;
    let failure = outcome.failure.as_ref().map(|e| e.to_string());
    if let Err(e) = write_run(&out, &outcome.series, failure, total_ms) {
        eprintln!("error: cannot write artifacts to {}: {e}", out.display());
        return EXIT_ERROR;
    }

    let state = &outcome.series.state;
    println!("output:        {}", out.display());
    println!("transform:     {}", outcome.series.transform.kind_name());
    println!("tasks done:    {} of {}", state.ledger.len(), cfg.task_budget);
    println!("coefficients:  {}", state.coefficients.len());
    if let Some(worst) = state.ledger.iter().map(|e| e.achieved_error / e.tol).reduce(f64::max) {
        println!("worst err/tol: {worst:.3e}");
    }
    println!("elapsed:       {total_ms:.1} ms");
    match outcome.failure {
        None => EXIT_OK,
        Some(e @ Error::ApproximationFailed { .. }) => {
            eprintln!("stopped: {e}");
            EXIT_APPROXIMATION_FAILED
        }
        Some(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

pub fn cmd_verify(dir: &Path, density_mult: f64, exec: Exec) -> i32 {
    let report = read_run(dir).and_then(|(series, _)| verify_series(&series, density_mult, exec));
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    if let Err(e) = write_verification(dir, &report) {
        eprintln!("error: cannot write {VERIFICATION_FILE}: {e}");
        return EXIT_ERROR;
    }
    let failed = report.rows.iter().filter(|r| !r.pass).count();
    println!("verified {} entries at density x{density_mult}: {failed} failed", report.rows.len());
    for r in report.rows.iter().filter(|r| !r.pass) {
        println!("  task {}: N = {}, error {:.3e} >= tol {:.3e}", r.task_index, r.chosen_n, r.recomputed_error, r.tol);
    }
    if report.all_pass { EXIT_OK } else { EXIT_ERROR }
}

pub fn cmd_plot_data(dir: &Path) -> i32 {
    match read_run(dir).and_then(|(series, _)| write_plot_data(dir, &series)) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
