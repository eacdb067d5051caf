//! `levytail`: functionals, tail bounds, simulation and validation from the
//! command line.
//!
//! Exit codes: 0 success, 2 configuration or precondition error, 3 numerical
//! failure, 4 no applicable bound, 5 a validation or rate check failed.

mod commands;
mod output;
mod settings;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use levy_tail::Error;

use settings::{Flags, Settings};

#[derive(Debug, Parser)]
#[command(name = "levytail", version, about = "Small-time tail bounds for Lévy processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// λ_a, σ²(a) and b(a) over a cutoff grid (CSV).
    Functionals,
    /// Every constant defined at α (JSON).
    Constants {
        #[arg(long)]
        alpha: f64,
        /// Class constant for the constants that depend on it.
        #[arg(long = "class-m")]
        class_m: Option<f64>,
    },
    /// One bound at (ε, t) with its constants and validity window (JSON).
    Bound,
    /// Compare bounds with the true tail on an (ε, t) grid (CSV or JSON).
    Validate {
        /// Multiply one constant, or the whole bound with `bound`, by a
        /// factor: `NAME:FACTOR`.
        #[arg(long)]
        perturb: Option<String>,
        /// Replace every bound by zero; the run must then fail wherever the
        /// truth is resolved away from λ_ε t.
        #[arg(long)]
        self_test: bool,
    },
    /// Residual curve and log-log slope (JSON or CSV).
    Rate {
        /// Fail unless the fitted slope lies in `lo:hi`.
        #[arg(long)]
        slope_window: Option<String>,
    },
    /// Monte Carlo estimate of P(|X_t| > ε) (JSON).
    Simulate,
}

/// Failure of a subcommand: a library error or a failed check.
#[derive(Debug)]
pub enum Failure {
    Lib(Error),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::QuadratureFailure { .. }
        | Error::NonIntegrableTail(_)
        | Error::DegenerateSigma(_)
        | Error::SchemeInfeasible(_)
        | Error::TruthUnavailable(_)
        | Error::TooFewPoints { .. } => 3,
        Error::NoApplicableBound { .. } | Error::WindowViolated { .. } => 4,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let settings = Settings::resolve(&cli.flags)?;
    match &cli.command {
        Command::Functionals => commands::functionals(&settings),
        Command::Constants { alpha, class_m } => commands::constants(&settings, *alpha, *class_m),
        Command::Bound => commands::bound(&settings),
        Command::Validate { perturb, self_test } => commands::validate(&settings, perturb.as_deref(), *self_test),
        Command::Rate { slope_window } => commands::rate(&settings, slope_window.as_deref()),
        Command::Simulate => commands::simulate(&settings),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(5)
        }
    }
}
