use std::process::ExitCode;

use clap::Parser;
use qdecay_cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qdecay: {e}");
            e.exit_code()
        }
    }
}
