//! `gi`: group analysis, affine-family scans, discriminant sieves and
//! residue reports, all written as CSV.
//!
//! Exit status is 0 on success, 1 when a check disagrees, and 2 for
//! configuration, resource or input errors.

mod args;
mod commands;
mod error;
mod shard;

use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<_> = std::env::args_os().collect();
    match args::parse(argv).and_then(commands::run) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gi: {e}");
            e.exit_code()
        }
    }
}
