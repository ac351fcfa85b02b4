mod cli;
mod commands;
mod error;
mod pair_spec;
mod report;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use log::error;

use cli::{Cli, Command};
use error::CliError;
use report::Report;

fn dispatch(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Exponents(a) => commands::exponents(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Fisher(a) => commands::fisher(a),
        Command::Simulate(a) => commands::simulate(a),
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let report = match cli.threads {
        Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot build thread pool: {e}")))?
            .install(|| dispatch(&cli.command))?,
        None => dispatch(&cli.command)?,
    };
    let stdout = io::stdout().lock();
    let mut out = io::BufWriter::new(stdout);
    if cli.csv {
        report::write_csv(&report, &mut out)?;
    } else {
        report::write_json(&report, &mut out)?;
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DEVEX_LOG", "off"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            error!("{e:?}");
            eprintln!("{}: {e}", e.kind());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
