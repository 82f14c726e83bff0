mod args;
mod domain;
mod expand;
mod output;
mod simulate;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use output::{Failure, Report};

fn run(cli: Cli) -> Result<Report, Failure> {
    match cli.command {
        Command::Expand(a) => expand::run(&a),
        Command::Verify(a) => verify::run(&a),
        Command::Domain(a) => domain::run(&a),
        Command::Simulate(a) => simulate::run(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli).and_then(Report::emit) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
