//! `macqc`: batch front end for the two-node controlled-iSWAP toolkit.
//!
//! Exit status is 0 when every verification in the report passes, 1 when a
//! verification fails, and 2 for usage, parse and input errors.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::output::Context;

#[derive(Debug, Parser)]
#[command(name = "macqc", version, about = "Controlled-iSWAP extraction, compilation and fidelity reports")]
struct Cli {
    /// Scenario JSON; defaults to the reference-scale preset.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Machine-readable report on stdout.
    #[arg(long, global = true)]
    json: bool,

    /// Overrides the scenario seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Directory for artifacts; stdout when absent.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extract the photon-controlled iSWAP and check its truth table.
    TruthTable(commands::truth_table::Args),
    /// Blockade error against the microcavity coupling ratio.
    BlockadeSweep(commands::blockade::Args),
    /// Lower a circuit file to native operations and verify it.
    Compile(commands::compile::Args),
    /// Run a native program or circuit on the dual-rail simulator.
    Simulate(commands::simulate::Args),
    /// Tabulate iSWAP fidelity and fault-tolerance margin.
    Fidelity(commands::fidelity::Args),
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let mut config = match &cli.config {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let prepare = |config: ScenarioConfig| -> Result<Context, CliError> {
        config.validate()?;
        Ok(Context::new(config, cli.json, cli.out.clone()))
    };
    match cli.command {
        Command::TruthTable(args) => {
            let ctx = prepare(args.apply(config))?;
            commands::truth_table::run(&ctx, &args)
        }
        Command::BlockadeSweep(args) => commands::blockade::run(&prepare(config)?, &args),
        Command::Compile(args) => commands::compile::run(&prepare(config)?, &args),
        Command::Simulate(args) => commands::simulate::run(&prepare(config)?, &args),
        Command::Fidelity(args) => commands::fidelity::run(&prepare(config)?, &args),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
