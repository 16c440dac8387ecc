//! `lf`: command-line front end for the littlewood toolkit.
//!
//! Exit codes: 0 on success (for `witness`, when some stage produced a
//! witness), 1 on usage or runtime errors, 2 when a run completed without
//! the sought result (no witness, or a failed check).

mod args;
mod commands;
mod config;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

use args::{Cli, Cmd};

fn run() -> anyhow::Result<u8> {
    let raw: Vec<_> = std::env::args_os().collect();
    let merged = config::merge(&Cli::command(), raw)?;
    let cli = match Cli::try_parse_from(merged) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return Ok(code);
        }
    };
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    let prec = littlewood::Precision::from_env()?;
    match cli.command {
        Cmd::Cf(a) => commands::cf(a),
        Cmd::Witness(a) => commands::witness(a, prec),
        Cmd::BcTable(a) => commands::bc_table(a),
        Cmd::PairScan(a) => commands::pair_scan(a),
        Cmd::Liminf(a) => commands::liminf(a, prec),
        Cmd::CartanCheck(a) => commands::cartan_check(a),
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<std::io::Error>())
        .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
