//! `moller`: cross sections, deviations, the invariant suite and reports for
//! tree-level Møller scattering in 2+1D Podolsky electrodynamics.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;
mod scan;
mod settings;

use clap::{ArgGroup, Args, Parser, Subcommand};
use std::process::ExitCode;

use settings::Settings;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or output path: exit 1.
    Usage(String),
    /// Inputs outside the physical domain: exit 2.
    Domain(String),
    /// A hard invariant failed: exit 3.
    Verification(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Verification(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::Verification(m) => m,
        }
    }
}

impl From<moller_core::Error> for CliError {
    fn from(e: moller_core::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "moller", version, about = "Tree-level Moller scattering in 2+1D Podolsky electrodynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Differential cross section at a point or over a scan.
    Xsec {
        #[command(flatten)]
        settings: Settings,
    },
    /// Relative deviation delta of the CM cross section from its Maxwell limit.
    Deviation {
        #[command(flatten)]
        settings: Settings,
    },
    /// Run the invariant suite; exit 3 if any hard invariant fails.
    Verify {
        #[command(flatten)]
        settings: Settings,
    },
    /// Consistency audit, benchmark scenarios or figure data.
    Report {
        #[command(flatten)]
        report: ReportArgs,
        #[command(flatten)]
        settings: Settings,
    },
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("kind").required(true).args(["consistency", "scenarios", "figure1"])))]
pub struct ReportArgs {
    /// Compare every pair of routes to the same quantity over a grid.
    #[arg(long)]
    pub consistency: bool,
    /// Deviation at the quoted benchmark scenarios.
    #[arg(long)]
    pub scenarios: bool,
    /// Nonrelativistic curves for several couplings.
    #[arg(long)]
    pub figure1: bool,
    /// Consistency grid: default (100 x 100) or small (12 x 12).
    #[arg(long, default_value = "default")]
    pub grid: String,
    /// Additional Podolsky masses for the scenario table, MeV.
    #[arg(long, value_delimiter = ',')]
    pub extra_mp: Vec<f64>,
    /// Couplings of the figure curves.
    #[arg(long, value_delimiter = ',', default_values_t = moller_core::report::FIGURE1_ALPHAS)]
    pub alphas: Vec<f64>,
    /// Number of figure angles when no angle scan is given.
    #[arg(long, default_value_t = 200)]
    pub theta_steps: usize,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Xsec { settings } => commands::xsec(&settings.resolve()?),
        Command::Deviation { settings } => commands::deviation(&settings.resolve()?),
        Command::Verify { settings } => commands::verify(&settings.resolve()?),
        Command::Report { report, settings } => commands::report(&report, &settings.resolve()?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("moller: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
