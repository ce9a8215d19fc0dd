use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod output;

use args::{Cli, Command, Format};
use commands::CliError;

fn run(cli: &Cli) -> Result<String, CliError> {
    let format = cli.format.unwrap_or(match cli.command {
        Command::Scan { .. } => Format::Csv,
        _ => Format::Json,
    });
    match &cli.command {
        Command::Probs(angles) => commands::probs(angles, format),
        Command::BellTest { visibility } => commands::bell_test(*visibility, format),
        Command::Scan { angles, grids } => commands::scan(angles, grids, format),
        Command::Swap => commands::swap(format),
        Command::NoiseThreshold => commands::noise_threshold(format),
        Command::TeleportFidelity { beta, phi } => commands::teleport_fidelity(*beta, *phi, format),
    }
}

fn main() -> ExitCode {
    // clap exits with status 2 on parse errors
    let cli = Cli::parse();
    let text = match run(&cli) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
