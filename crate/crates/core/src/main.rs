use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use semidirect::cli_io::{self, parse_config, RunConfig, RunOptions};
use semidirect::Error;

#[derive(Parser)]
#[command(
    name = "semidirect",
    version,
    about = "Structure-preserving integrators for semidirect-product flows"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Suppress progress messages.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate from the seeded initial condition.
    Run { config: PathBuf },
    /// Validate a configuration without running it.
    Check { config: PathBuf },
    /// Continue from a snapshot file.
    Resume { snapshot: PathBuf, config: PathBuf },
}

fn load(path: &PathBuf) -> Result<RunConfig, Error> {
    parse_config(&fs::read_to_string(path)?)
}

fn execute(cli: &Cli) -> Result<i32, Error> {
    let opts = RunOptions {
        out_dir: cli.out.clone(),
        quiet: cli.quiet,
    };
    let summary = match &cli.command {
        Command::Check { config } => {
            let cfg = load(config)?;
            cfg.build_model()?;
            if !cli.quiet {
                let size = cfg.n.map_or(String::new(), |n| format!(", N = {n}"));
                println!(
                    "ok: {}{size}, {} steps of h = {}",
                    cfg.model.as_str(),
                    cfg.steps(),
                    cfg.h
                );
            }
            return Ok(0);
        }
        Command::Run { config } => cli_io::run(&load(config)?, &opts)?,
        Command::Resume { snapshot, config } => cli_io::resume(snapshot, &load(config)?, &opts)?,
    };
    Ok(match summary.failure {
        Some(err) => {
            eprintln!("error at step {}: {err}", summary.last_step + 1);
            cli_io::exit_code(&err)
        }
        None => 0,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(cli_io::exit_code(&err) as u8)
        }
    }
}
