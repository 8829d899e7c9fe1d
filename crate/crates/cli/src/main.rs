//! `sfpas`: JSON front end to the stability tests, toric combinatorics, abelian invariants
//! and vortex solver of `sfpas-core`.
//!
//! Exit codes: 0 success, 2 invalid input, 3 non-convergence or limits, 4 internal error.

mod commands;
mod error;
mod input;
mod output;

use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{family, invariants, quiver, toric, vortex};
use error::{CliError, INTERNAL};

#[derive(Parser)]
#[command(name = "sfpas", version, about = "Stability, toric and vortex computations for symplectic factorization problems")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Moment maps and the Kempf–Ness flow on quiver problems.
    #[command(subcommand)]
    Quiver(quiver::QuiverCmd),
    /// Exact stability of flag chains.
    #[command(subcommand)]
    Flag(family::FlagCmd),
    /// Strømme triples.
    #[command(subcommand)]
    Stromme(family::StrommeCmd),
    /// Toric matrices, fans and abelian stability.
    #[command(subcommand)]
    Toric(toric::ToricCmd),
    /// Exterior-algebra invariants.
    #[command(subcommand)]
    Invariants(invariants::InvariantsCmd),
    /// Abelian vortices on a flat torus.
    #[command(subcommand)]
    Vortex(vortex::VortexCmd),
}

fn run(cli: Cli) -> Result<(), CliError> {
    let g = cli.global;
    match cli.command {
        Command::Quiver(c) => quiver::run(c, &g),
        Command::Flag(c) => family::run_flag(c, &g),
        Command::Stromme(c) => family::run_stromme(c, &g),
        Command::Toric(c) => toric::run(c, &g),
        Command::Invariants(c) => invariants::run(c, &g),
        Command::Vortex(c) => vortex::run(c, &g),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("SFPAS_LOG")).init();
    let cli = Cli::parse();
    match panic::catch_unwind(move || run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
        Err(_) => ExitCode::from(INTERNAL),
    }
}
