//! `pairglow`: entanglement dynamics of two freely moving atoms from the
//! command line.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{average, figures, pattern, simulate, sweep, validate};
use error::{CliError, CliResult};
use output::OutDir;

#[derive(Debug, Parser)]
#[command(
    name = "pairglow",
    version,
    about = "Concurrence dynamics of an atom pair with quantized distance"
)]
struct Cli {
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Worker threads for grid evaluations (default: all cores).
    #[arg(long, global = true, env = "PAIRGLOW_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evolve one scenario and write concurrence, X-state and summary files.
    Simulate(simulate::SimulateArgs),
    /// Write the data behind the standard figures.
    Figures(figures::FiguresArgs),
    /// Critical times over a grid of (p, q, mu_bar).
    Sweep(sweep::SweepArgs),
    /// Check that a physical configuration is in the free-atom regime.
    Validate(validate::ValidateArgs),
    /// Tabulate the dissipative dipole-dipole pattern.
    Pattern(pattern::PatternArgs),
    /// Average the pattern over a distance distribution.
    Average(average::AverageArgs),
}

fn run(cli: &Cli) -> CliResult<()> {
    if cli.jobs == Some(0) {
        return Err(CliError::Config("--jobs must be at least 1".into()));
    }
    let out = OutDir::create(&cli.out)?;
    match &cli.command {
        Command::Simulate(a) => simulate::run(a, &out),
        Command::Figures(a) => figures::run(a, &out, cli.jobs),
        Command::Sweep(a) => sweep::run(a, &out, cli.jobs),
        Command::Validate(a) => validate::run(a, &out),
        Command::Pattern(a) => pattern::run(a, &out, cli.jobs),
        Command::Average(a) => average::run(a, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
