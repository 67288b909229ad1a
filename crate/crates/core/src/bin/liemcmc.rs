use std::process::ExitCode;

use clap::Parser;
use liemcmc::cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
