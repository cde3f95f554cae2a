use std::process::ExitCode;

use clap::Parser;
use dephasing_limits::cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dephasing: {e}");
            ExitCode::FAILURE
        }
    }
}
