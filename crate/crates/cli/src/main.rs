//! `stochlab` command-line front end.

mod commands;
mod config;
mod error;
mod output;

use clap::{Parser, Subcommand};
use commands::{asymmetry, envelope, mi, parrondo, production, selfcheck, vol};
use config::CommonArgs;
use error::CliResult;

#[derive(Parser)]
#[command(name = "stochlab", version, about = "Dependence estimators, production volatility and ladder games")]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mutual information of paired samples or AR(1) fixtures
    Mi(mi::MiArgs),
    /// Night→day versus day→night dependence of session returns
    Asymmetry(asymmetry::AsymmetryArgs),
    /// Rolling session volatility and lead-lag correlations
    Vol(vol::VolArgs),
    /// Cumulative-production densities, moments and Monte-Carlo
    Production(production::ProductionArgs),
    /// Ladder games: rates, exact distributions, asymptotics
    Parrondo(parrondo::ParrondoArgs),
    /// Two-envelope capital growth
    Envelope(envelope::EnvelopeArgs),
    /// Runs the invariant suite and prints a pass/fail table
    Selfcheck(selfcheck::SelfcheckArgs),
}

fn run(cli: Cli) -> CliResult<()> {
    let c = cli.common;
    match cli.command {
        Command::Mi(a) => mi::run(c, a),
        Command::Asymmetry(a) => asymmetry::run(c, a),
        Command::Vol(a) => vol::run(c, a),
        Command::Production(a) => production::run(c, a),
        Command::Parrondo(a) => parrondo::run(c, a),
        Command::Envelope(a) => envelope::run(c, a),
        Command::Selfcheck(a) => selfcheck::run(c, a),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
