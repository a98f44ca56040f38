//! Config-driven experiment runner for the interval discretizations of the
//! fractional and logarithmic Laplacians.

mod config;
mod runner;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use config::CommandKind;

#[derive(Parser)]
#[command(
    name = "fraclap",
    version,
    about = "Assemble nonlocal stiffness matrices, compute ground eigenpairs, \
             solve the associated variational problems, and audit vanishing-order sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Assemble a stiffness matrix and write it as CSV.
    Assemble(RunArgs),
    /// Compute the ground eigenpair, or the eigenvalue expansion table when
    /// the config gives an order list.
    Eigen(RunArgs),
    /// Solve one variational problem and write the profile and summary.
    Solve(RunArgs),
    /// Run a decreasing-order schedule and audit the limit bounds.
    Sweep(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the TOML config document.
    config: PathBuf,
    /// Directory for output artifacts; overrides the config's output_dir.
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Suppress result and audit lines on stdout.
    #[arg(long)]
    quiet: bool,
}

fn main() {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Assemble(args) => (CommandKind::Assemble, args),
        Command::Eigen(args) => (CommandKind::Eigen, args),
        Command::Solve(args) => (CommandKind::Solve, args),
        Command::Sweep(args) => (CommandKind::Sweep, args),
    };
    std::process::exit(runner::run(
        kind,
        &args.config,
        args.output_dir.clone(),
        args.quiet,
    ));
}
