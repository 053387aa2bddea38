use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qfunctor_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let response = run(&cli);
    let _ = std::io::stdout().write_all(response.stdout.as_bytes());
    let _ = std::io::stderr().write_all(response.stderr.as_bytes());
    ExitCode::from(response.code)
}
