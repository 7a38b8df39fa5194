mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde::Serialize;

use args::{Cli, Command};
use output::{write_output, CliError, Format, Provenance};

fn config_echo<T: Serialize>(format: Format, args: &T) -> Result<serde_json::Value, CliError> {
    let mut v = serde_json::to_value(args)?;
    if let Some(map) = v.as_object_mut() {
        map.insert("format".into(), serde_json::to_value(format)?);
    }
    Ok(v)
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(w) = cli.workers {
        if w == 0 {
            return Err(CliError::Validation("--workers must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| CliError::Validation(e.to_string()))?;
    }
    let name = cli.command.name();
    let config = match &cli.command {
        Command::Gen(a) => config_echo(cli.format, a)?,
        Command::GhTable(a) => config_echo(cli.format, a)?,
        Command::Spectrum(a) => config_echo(cli.format, a)?,
        Command::Dimension(a) => config_echo(cli.format, a)?,
        Command::Kantorovich(a) => config_echo(cli.format, a)?,
        Command::Extent(a) => config_echo(cli.format, a)?,
        Command::Covariant(a) => config_echo(cli.format, a)?,
    };
    let prov = Provenance::new(name, cli.seed, config);
    let outcome = match &cli.command {
        Command::Gen(a) => commands::gen(a, &prov)?,
        Command::GhTable(a) => commands::gh_table(a, &prov)?,
        Command::Spectrum(a) => commands::spectrum(a, &prov)?,
        Command::Dimension(a) => commands::dimension(a, &prov)?,
        Command::Kantorovich(a) => commands::kantorovich_cmd(a, &prov)?,
        Command::Extent(a) => commands::extent(a, &prov, cli.seed)?,
        Command::Covariant(a) => commands::covariant(a, &prov, cli.seed)?,
    };
    write_output(cli.format, &cli.out, name, outcome.rendered)?;
    match outcome.deferred {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Validation(e.render().to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
