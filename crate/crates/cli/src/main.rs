use std::process::ExitCode;

use bessel_subord::{run, Cli, ERROR_EXIT};
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // --help and --version are not usage errors
            return ExitCode::from(if e.use_stderr() { ERROR_EXIT as u8 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(outcome) => ExitCode::from(outcome.exit_code() as u8),
        Err(e) => {
            eprintln!("bessel-subord: {e}");
            ExitCode::from(ERROR_EXIT as u8)
        }
    }
}
