//! Command-line front end. All logic lives in the library; this binary
//! parses arguments, dispatches, and prints reports to stdout (diagnostics
//! go to stderr, and the exit code reflects operational success only — an
//! infeasible verdict is an answer, not an error).

use clap::{Parser, Subcommand};
use qsteer::commands::{
    self, load_ensemble, load_report, load_scenario, run_check, run_ontic, run_povm,
};
use qsteer::sweep::{self, BetaMode, Grid, SweepConfig};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "qsteer",
    version,
    about = "Decide whether a local hidden-variable model exists for a qubit steering scenario"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the cell model of a scenario file, decide feasibility, and
    /// print a JSON report with the witness or Farkas certificate
    Check {
        /// Scenario file (JSON, quantum or abstract mode)
        file: PathBuf,
    },
    /// Check whether pure states can be points of the ontic space
    /// (delta distributions); prints the contradiction witness if not
    Ontic {
        /// Scenario file (JSON)
        file: PathBuf,
    },
    /// Scan alpha (and beta) and print verdicts as CSV
    Sweep {
        /// Alpha grid as start:stop:step inside (0, 1)
        #[arg(long)]
        alpha: String,
        /// Number of bases: 2 or 3
        #[arg(long)]
        bases: usize,
        /// How beta is chosen for three-basis scans
        #[arg(long = "beta-mode", default_value = "quantum")]
        beta_mode: String,
        /// Beta grid as start:stop:step (required for --beta-mode grid)
        #[arg(long)]
        beta: Option<String>,
    },
    /// Construct the steering measurement for an ensemble file and check
    /// the collapse it produces
    Povm {
        /// Ensemble file (JSON)
        file: PathBuf,
    },
    /// Re-verify the Farkas certificate embedded in a check report
    VerifyCert {
        /// Report file produced by `check`
        file: PathBuf,
    },
}

fn main() {
    if let Err(err) = run(Cli::parse()) {
        eprintln!("error: {err}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<(), Box<dyn std::error::Error>> {
    match cli.command {
        Command::Check { file } => {
            let scenario = load_scenario(&file)?;
            if !scenario.is_exact() {
                eprintln!("note: floating-point arithmetic (exact mode needs all-rational overlaps)");
            }
            let report = run_check(&scenario)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Ontic { file } => {
            let scenario = load_scenario(&file)?;
            let report = run_ontic(&scenario);
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Sweep {
            alpha,
            bases,
            beta_mode,
            beta,
        } => {
            let config = SweepConfig {
                alpha: alpha.parse::<Grid>()?,
                bases,
                beta_mode: beta_mode.parse::<BetaMode>()?,
                beta: beta.map(|b| b.parse::<Grid>()).transpose()?,
            };
            let rows = sweep::run_sweep(&config)?;
            print!("{}", sweep::rows_to_csv(&rows));
        }
        Command::Povm { file } => {
            let ensemble = load_ensemble(&file)?;
            let report = run_povm(&ensemble)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::VerifyCert { file } => {
            let report = load_report(&file)?;
            let result = commands::verify_report_certificate(&report)?;
            println!("{}", serde_json::to_string_pretty(&result)?);
        }
    }
    Ok(())
}
