use std::io;
use std::process::ExitCode;

use clap::Parser;
use jndmix::batch::{run, RunConfig};

fn main() -> ExitCode {
    let config = RunConfig::parse();
    match run(&config) {
        Ok(outcome) => {
            if let Err(e) = outcome.write_to(&mut io::stdout().lock(), &mut io::stderr().lock()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
