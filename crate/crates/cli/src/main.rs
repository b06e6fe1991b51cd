use std::process::ExitCode;

use clap::Parser;
use radial_itp_cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
