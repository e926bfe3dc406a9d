use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hopt::cli::{execute, Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match &cli.command {
        Command::Check { opts, .. } | Command::EvalFile { opts, .. } => opts.output.clone(),
    };
    let done = execute(cli);
    if !done.stderr.is_empty() {
        eprintln!("{}", done.stderr);
    }
    let written = match output {
        Some(path) => std::fs::write(&path, &done.stdout),
        None => std::io::stdout().write_all(done.stdout.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("cannot write report: {}", e);
        return ExitCode::from(2);
    }
    ExitCode::from(done.code as u8)
}
