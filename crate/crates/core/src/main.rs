use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let args = goodbox::cli::RunConfig::parse();
    ExitCode::from(goodbox::cli::run(&args))
}
