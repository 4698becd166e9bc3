use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use synto_cli::{run, Cli, CliError, EXIT_USAGE};

fn dispatch(cli: &Cli) -> anyhow::Result<()> {
    let what = match &cli.command {
        synto_cli::Command::Syntomic(a) => format!("syntomic table at p = {}", a.prime),
        synto_cli::Command::Fgl { .. } => "formal group series".to_string(),
        synto_cli::Command::Ss(_) => "spectral sequence run".to_string(),
        synto_cli::Command::Chart(_) => "chart".to_string(),
    };
    run(cli).with_context(|| format!("{what} failed"))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = e
                .downcast_ref::<CliError>()
                .map_or(EXIT_USAGE, CliError::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
