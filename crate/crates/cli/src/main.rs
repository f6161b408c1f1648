//! `hyperavoid` command-line front end.
//!
//! Reports go to stdout as JSON (or CSV with `--format csv`), diagnostics to
//! stderr. Exit codes: 0 success, 1 replay mismatch or output failure,
//! 2 invalid input, 3 a size cap or ceiling refused the run.

mod args;
mod commands;
mod manifest;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Command};
use manifest::RunManifest;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] hyperavoid::Error),
    #[error("{0}")]
    Input(String),
    #[error("replay mismatch: {0}")]
    Replay(String),
    #[error(transparent)]
    Io(std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_limit() => 3,
            CliError::Core(_) | CliError::Input(_) => 2,
            CliError::Replay(_) | CliError::Io(_) | CliError::Json(_) | CliError::Csv(_) => 1,
        }
    }
}

fn render(cli: &Cli) -> Result<String, CliError> {
    let limits = cli.global.caps.limits();
    commands::execute(&cli.command, &limits)?.render(cli.global.format)
}

fn replay(path: &std::path::Path) -> Result<String, CliError> {
    let m = RunManifest::read(path)?;
    let argv = std::iter::once("hyperavoid".to_string()).chain(m.args.iter().cloned());
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Input(format!("manifest arguments: {e}")))?;
    if matches!(cli.command, Command::Replay { .. }) {
        return Err(CliError::Input("a manifest cannot replay another manifest".into()));
    }
    if m.version != env!("CARGO_PKG_VERSION") {
        eprintln!("note: manifest written by version {}, replaying with {}", m.version, env!("CARGO_PKG_VERSION"));
    }
    let output = render(&cli)?;
    let got = manifest::digest(&output);
    if got != m.output_sha256 {
        return Err(CliError::Replay(format!("expected digest {}, got {got}", m.output_sha256)));
    }
    Ok(output)
}

fn run(argv: Vec<OsString>) -> Result<String, CliError> {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            std::process::exit(e.exit_code());
        }
    };
    if let Some(threads) = cli.global.threads {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| CliError::Input(format!("--threads: {e}")))?;
    }
    let start = Instant::now();
    let output = match &cli.command {
        Command::Replay { path } => replay(path)?,
        _ => render(&cli)?,
    };
    if let Some(path) = &cli.global.manifest {
        RunManifest {
            subcommand: cli.command.name().to_string(),
            args: manifest::replayable_args(&argv),
            seed: cli.command.seed(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_ms: start.elapsed().as_millis(),
            output_sha256: manifest::digest(&output),
        }
        .write(path)?;
    }
    Ok(output)
}

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(output) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(output.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
