use std::process::ExitCode;

use lsndyn::{execute, exit_code, parse_cli, CliError};

fn main() -> ExitCode {
    let config = match parse_cli(std::env::args_os()) {
        Ok(c) => c,
        Err(err @ CliError::Clap(_)) => {
            let CliError::Clap(e) = &err else { unreachable!() };
            let _ = e.print();
            return ExitCode::from(err.exit_code());
        }
        Err(CliError::Run(e)) => {
            eprintln!("lsndyn: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    match execute(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lsndyn: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
