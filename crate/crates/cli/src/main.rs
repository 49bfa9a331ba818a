use std::io;
use std::process::ExitCode;

use clap::Parser;
use periodic_roots_cli::{run, Cli, RunConfig};

fn main() -> ExitCode {
    let config = RunConfig::from(Cli::parse());
    let code = run(&config, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
