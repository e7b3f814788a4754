use clap::Parser;
use qmem::cli::{run, Cli};
use std::process::ExitCode;

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(cli.command, &mut std::io::stdout().lock(), &mut std::io::stderr().lock()))
}
