use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = qecv::cli::Cli::parse();
    match qecv::run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.output);
            let _ = std::io::stdout().flush();
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.exit as u8)
        }
    }
}
