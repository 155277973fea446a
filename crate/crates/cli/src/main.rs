use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ontoscope::commands;

/// Workbench for ontological models of finite-dimensional quantum systems:
/// validate and classify hidden-variable models, search for maximal
/// epistemic overlap by linear programming, and run the product-preparation
/// contradiction harness.
#[derive(Parser)]
#[command(name = "ontoscope", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model file against every model invariant.
    Validate {
        /// Model JSON file.
        path: PathBuf,
    },
    /// Classify a model file and print the pairwise overlap table.
    Classify {
        /// Model JSON file.
        path: PathBuf,
        /// Support threshold for overlap detection.
        #[arg(long, default_value_t = 1e-12)]
        eps_supp: f64,
        /// Tolerance for the response-vs-Born epistemicity criterion.
        #[arg(long, default_value_t = 1e-6)]
        tol_eq6: f64,
        /// Slack allowed on the overlap bound in the report table.
        #[arg(long, default_value_t = 1e-9)]
        bound_tol: f64,
        /// Emit the overlap table as CSV after the classification JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Audit the overlap bound `delta <= |<psi|phi>|^2` for every pair.
    Overlap {
        /// Model JSON file.
        path: PathBuf,
        /// Support threshold.
        #[arg(long, default_value_t = 1e-12)]
        eps_supp: f64,
        /// Slack allowed on the bound.
        #[arg(long, default_value_t = 1e-9)]
        bound_tol: f64,
        /// Born-reproduction tolerance the model must meet first.
        #[arg(long, default_value_t = 1e-9)]
        born_tol: f64,
        /// Emit CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Maximize the symmetric overlap of two epistemic states by LP.
    OverlapSearch {
        /// Hilbert-space dimension (currently 2).
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Two comma-separated state tokens (0, 1, +, -, i, -i,
        /// theta:<degrees>).
        #[arg(long)]
        states: Option<String>,
        /// Comma-separated measurement tokens (Z, X, Y).
        #[arg(long, default_value = "Z,X")]
        measurements: String,
        /// Sweep start:stop:count in degrees over pairs
        /// (|0>, cos t|0> + sin t|1>).
        #[arg(long)]
        sweep: Option<String>,
        /// Slack on the Born-reproduction constraints.
        #[arg(long, default_value_t = 0.0)]
        tol: f64,
        /// Solve in exact rational arithmetic.
        #[arg(long)]
        exact: bool,
        /// Emit CSV instead of JSON.
        #[arg(long)]
        csv: bool,
    },
    /// Emit the product-preparation contradiction certificate.
    Pbr {
        /// Hypothesized symmetric overlap of the single-system states.
        #[arg(long, default_value_t = 0.1)]
        overlap_q: f64,
        /// Certify the joint LP in exact rational arithmetic.
        #[arg(long)]
        exact: bool,
    },
    /// Interferometer bomb-detector outcome probabilities.
    DemoBomb {
        /// Remove the bomb (control run).
        #[arg(long)]
        no_bomb: bool,
    },
    /// Write all fixture models to a directory as JSON documents.
    Zoo {
        /// Output directory.
        dir: PathBuf,
        /// Grid size for the Bloch-sphere model.
        #[arg(long, default_value_t = 20000)]
        ks_grid: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate { path } => commands::cmd_validate(path),
        Command::Classify {
            path,
            eps_supp,
            tol_eq6,
            bound_tol,
            csv,
        } => commands::cmd_classify(path, *eps_supp, *tol_eq6, *bound_tol, *csv),
        Command::Overlap {
            path,
            eps_supp,
            bound_tol,
            born_tol,
            csv,
        } => commands::cmd_overlap(path, *eps_supp, *bound_tol, *born_tol, *csv),
        Command::OverlapSearch {
            dim,
            states,
            measurements,
            sweep,
            tol,
            exact,
            csv,
        } => commands::cmd_overlap_search(
            *dim,
            states.as_deref(),
            measurements,
            sweep.as_deref(),
            *tol,
            *exact,
            *csv,
        ),
        Command::Pbr { overlap_q, exact } => commands::cmd_pbr(*overlap_q, *exact),
        Command::DemoBomb { no_bomb } => commands::cmd_demo_bomb(*no_bomb),
        Command::Zoo { dir, ks_grid } => commands::cmd_zoo(dir, *ks_grid),
    };
    match result {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            if failure.exit_code == 1 {
                // Domain verdicts still print their report to stdout.
                print!("{}", failure.message);
            } else {
                eprintln!("{}", failure.message.trim_end());
            }
            ExitCode::from(failure.exit_code as u8)
        }
    }
}
