//! Binary entry point: parse arguments, run the command, print the report,
//! and map failures onto the documented exit codes (1 file/parse, 2 domain,
//! 64 usage).

use std::process::ExitCode;

use clap::Parser;

use linkcert_cli::{execute, render, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version requests print to stdout and exit 0; real
            // argument errors print usage to stderr and exit 64.
            let code = if err.use_stderr() { 64 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let format = cli.format;
    match execute(&cli) {
        Ok(report) => {
            print!("{}", render(&report, format));
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
