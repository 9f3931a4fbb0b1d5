use std::process::ExitCode;

use clap::Parser;
use jury::cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("jury: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
