//! `stepup` command-line tool.
//!
//! Machine-readable results go to stdout as JSON; tables, progress and the
//! config line go to stderr. Exit codes: 0 ok, 1 claim violation or rejected
//! input, 2 inconclusive, 3 I/O or format error, 4 usage error.

mod args;
mod commands;
mod files;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, FromArgMatches};
use stepup_core::{Error, FORMAT_VERSIONS};

use args::{Cli, Command};
use commands::Status;

const EXIT_IO: u8 = 3;
const EXIT_USAGE: u8 = 4;

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Json(_) | Error::Format(_) => EXIT_IO,
        Error::ClaimViolation(_) | Error::Certificate(_) => Status::Violation as u8,
        Error::SearchExhausted { .. } | Error::Resource(_) => Status::Inconclusive as u8,
        _ => EXIT_USAGE,
    }
}

fn parse() -> Result<Cli, ExitCode> {
    let version: &'static str = Box::leak(
        format!("{} (formats: {FORMAT_VERSIONS})", env!("CARGO_PKG_VERSION")).into_boxed_str(),
    );
    let matches = Cli::command().version(version).try_get_matches();
    let parsed = matches.and_then(|m| Cli::from_arg_matches(&m));
    parsed.map_err(|e| {
        let _ = e.print();
        match e.kind() {
            ErrorKind::DisplayHelp
            | ErrorKind::DisplayVersion
            | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => ExitCode::SUCCESS,
            _ => ExitCode::from(EXIT_USAGE),
        }
    })
}

fn main() -> ExitCode {
    let cli = match parse() {
        Ok(cli) => cli,
        Err(code) => return code,
    };
    if cli.workers == 0 {
        eprintln!("error: --workers must be positive");
        return ExitCode::from(EXIT_USAGE);
    }
    // only seeded commands draw a seed, and the one used is always printed
    let seed = match &cli.command {
        Command::GenPhi(a) => Some(a.seed.unwrap_or_else(rand::random)),
        Command::Witness(a) if a.planted.is_some() => Some(a.seed.unwrap_or_else(rand::random)),
        _ => None,
    };
    let seed_note = seed.map(|s| format!("seed={s} ")).unwrap_or_default();
    eprintln!(
        "config: {seed_note}workers={} budget={} {:?}",
        cli.workers, cli.budget, cli.command
    );
    let seed = seed.unwrap_or(0);

    let result = commands::timed(|| match &cli.command {
        Command::GenPhi(a) => commands::gen_phi(&cli, a, seed),
        Command::CheckPhi(a) => commands::check_phi(&cli, a),
        Command::Proofcheck(a) => commands::proofcheck(a),
        Command::Verify(a) => commands::verify(&cli, a),
        Command::Clique(a) => commands::clique(&cli, a),
        Command::Witness(a) => commands::witness(a, seed),
        Command::Steiner(a) => commands::steiner(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::ChiEval(a) => commands::chi_eval(a),
    });
    match result {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
