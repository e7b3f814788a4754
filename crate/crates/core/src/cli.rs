//! Command-line front end. `run` is independent of the process so the
//! commands can be exercised in-process.

use crate::compute::{compute_diamond, compute_fe, compute_recovery, exit_code};
use crate::diamond::DiamondOptions;
use crate::multicycle::{fig4_data, DEFAULT_FE_PREV};
use crate::recovery::RecoveryOptions;
use crate::report::{self, write_atomic, GRID_STEP};
use crate::spectator::{fig3_data, SpectatorConfig, DEFAULT_GAMMAS};
use crate::verify::run_verify;
use crate::Result;
use clap::{Parser, Subcommand};
use serde_json::json;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(name = "qmem", version, about = "Recovery bounds for quantum memories with drifting noise")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Mean fidelity loss from QCRB-limited noise estimates, per γ and θ.
    Fig3 {
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_GAMMAS.to_vec())]
        gammas: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = GRID_STEP)]
        grid: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multi-cycle upper bounds with perfect and incomplete noise knowledge.
    Fig4 {
        #[arg(long = "fe-prev", value_delimiter = ',', default_values_t = DEFAULT_FE_PREV.to_vec())]
        fe_prev: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = GRID_STEP)]
        grid: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recovery strategies compared on θ ∈ [0, 0.5], with the Leung crossing.
    Fig5 {
        #[arg(long, default_value_t = GRID_STEP)]
        grid: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Small-θ expansions and fits of the exact curves.
    Table {
        #[arg(long)]
        json: bool,
        /// Also fit the numerically optimal recovery using this seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Diamond-distance estimate between two channel files.
    Diamond {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, env = "QMEM_SEED")]
        seed: u64,
        #[arg(long, default_value_t = 32)]
        starts: usize,
    },
    /// Entanglement and average fidelity of a channel file.
    Fe {
        #[arg(long)]
        channel: PathBuf,
    },
    /// Numerically optimal recovery for a noise channel file.
    OptimizeRecovery {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long, env = "QMEM_SEED")]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        starts: usize,
        /// Where to write the recovery channel JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the property suite; exits nonzero on any gating failure.
    Verify {
        #[arg(long)]
        filter: Option<String>,
        #[arg(long, env = "QMEM_SEED")]
        seed: u64,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
        /// Print the JSON report instead of the text summary.
        #[arg(long)]
        json: bool,
    },
}

fn emit(stdout: &mut dyn Write, out: Option<&Path>, contents: &str) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, contents),
        None => Ok(stdout.write_all(contents.as_bytes())?),
    }
}

fn print_json(stdout: &mut dyn Write, v: &serde_json::Value) -> Result<()> {
    Ok(writeln!(stdout, "{}", serde_json::to_string_pretty(v).expect("JSON values serialize"))?)
}

/// Runs one command, writing its normal output to `stdout` and diagnostics to
/// `stderr`; returns the process exit status.
pub fn run(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    match dispatch(cmd, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e) as u8
        }
    }
}

fn dispatch(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<u8> {
    match cmd {
        Command::Fig3 { gammas, m, grid, out } => {
            let rows = fig3_data(&gammas, &report::default_interior_grid(grid)?, m)?;
            emit(stdout, out.as_deref(), &report::fig3_csv(&rows))?;
        }
        Command::Fig4 { fe_prev, gamma, m, grid, out } => {
            let cfg = SpectatorConfig::new(gamma, m)?;
            let rows = fig4_data(&fe_prev, &report::default_interior_grid(grid)?, &cfg)?;
            emit(stdout, out.as_deref(), &report::fig4_csv(&rows))?;
        }
        Command::Fig5 { grid, out } => {
            let rows = report::fig5_data(&report::theta_grid(grid, 0.5, true)?)?;
            emit(stdout, out.as_deref(), &report::fig5_csv(&rows))?;
            let summary = json!({
                "crossing_exact": report::crossing_threshold(&rows)?,
                "crossing_series": report::series_crossing(),
            });
            if out.is_some() {
                print_json(stdout, &summary)?;
            } else {
                writeln!(stderr, "{summary}")?;
            }
        }
        Command::Table { json, seed } => {
            let opts = seed.map(RecoveryOptions::with_seed);
            let t = report::run_table(opts.as_ref())?;
            if json {
                print_json(stdout, &serde_json::to_value(&t).expect("table serializes"))?;
            } else {
                write!(stdout, "{}", t.to_text())?;
            }
        }
        Command::Diamond { a, b, seed, starts } => {
            let opts = DiamondOptions { starts, ..DiamondOptions::with_seed(seed) };
            print_json(stdout, &compute_diamond(&a, &b, &opts)?)?;
        }
        Command::Fe { channel } => print_json(stdout, &compute_fe(&channel)?)?,
        Command::OptimizeRecovery { channel, seed, starts, out } => {
            let opts = RecoveryOptions { starts, ..RecoveryOptions::with_seed(seed) };
            print_json(stdout, &compute_recovery(&channel, &opts, out.as_deref())?)?;
        }
        Command::Verify { filter, seed, report: report_path, json } => {
            let rep = run_verify(filter.as_deref(), seed);
            let value = serde_json::to_value(&rep).expect("report serializes");
            if let Some(p) = report_path {
                write_atomic(&p, &serde_json::to_string_pretty(&value).expect("JSON values serialize"))?;
            }
            if json {
                print_json(stdout, &value)?;
            } else {
                write!(stdout, "{}", rep.summary())?;
                let status = if rep.passed { "all gating checks passed".to_string() } else { format!("failed: {}", rep.failed.join(", ")) };
                writeln!(stdout, "{} checks, {status}", rep.checks.len())?;
            }
            return Ok(u8::from(!rep.passed));
        }
    }
    Ok(0)
}
