//! `sturmwell`: bound states of one-dimensional boxed potentials.
//!
//! Exit codes: 0 success, 1 solver or verification failure, 2 usage or
//! configuration error.

// `!(x >= 0)` instead of `x < 0` so NaN input is also rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use clap::{Parser, Subcommand};

use config::{CliError, CommonOpts, RunConfig};

#[derive(Parser)]
#[command(
    name = "sturmwell",
    about = "Bound states, nodes, and oscillation-theory checks for 1D boxed potentials",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the lowest k states: energies, node counts, node positions
    Solve(CommonOpts),
    /// Track the lowest branches across a wall-separation schedule
    Sweep(CommonOpts),
    /// Run node-count, interlacing, separation, and identity checks
    Verify(CommonOpts),
    /// List node positions of the lowest k states
    Nodes(CommonOpts),
    /// Exact square-well bound states from the transcendental conditions
    Oracle(CommonOpts),
}

type CommandFn = fn(&RunConfig) -> Result<(), CliError>;

fn run(cli: &Cli) -> Result<(), CliError> {
    let (opts, go): (&CommonOpts, CommandFn) = match &cli.command {
        Command::Solve(o) => (o, commands::cmd_solve),
        Command::Sweep(o) => (o, commands::cmd_sweep),
        Command::Verify(o) => (o, commands::cmd_verify),
        Command::Nodes(o) => (o, commands::cmd_nodes),
        Command::Oracle(o) => (o, commands::cmd_oracle),
    };
    let cfg = RunConfig::resolve(opts)?;
    go(&cfg)
}

fn main() {
    // clap's generated exit code for usage errors is 2, matching ours.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(&cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("sturmwell: {e}");
            std::process::exit(match e {
                CliError::Failure(_) => 1,
                CliError::Config(_) => 2,
            });
        }
    }
}
