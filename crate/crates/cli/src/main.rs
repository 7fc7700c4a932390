mod args;
mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// 0 success, 2 precondition or bad input, 3 numerical non-convergence, 4 I/O.
fn exit_code(e: &anyhow::Error) -> u8 {
    if let Some(ce) = e.downcast_ref::<lsjulia_core::Error>() {
        if ce.is_io() {
            4
        } else if ce.is_convergence_failure() {
            3
        } else {
            2
        }
    } else if e.downcast_ref::<std::io::Error>().is_some() {
        4
    } else {
        1
    }
}

fn workers(cmd: &Command) -> Option<usize> {
    match cmd {
        Command::Green(a) => a.common.workers,
        Command::Boundary(a) => a.common.workers,
        Command::Scan(a) => a.common.workers,
        Command::Fit(a) => a.common.workers,
        Command::Obstruct(a) => a.common.workers,
        Command::Envelope(a) => a.common.workers,
        Command::Relation(a) => a.common.workers,
        Command::Corona(a) => a.common.workers,
        Command::Hyperbolic(a) => a.common.workers,
        Command::Counterexample(a) => a.common.workers,
    }
}

fn main() -> ExitCode {
    let argv = match config::merge(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let cli = Cli::parse_from(argv);
    let cmd = &cli.command;
    match lsjulia_core::parallel::with_workers(workers(cmd), || commands::run(cmd)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error in {}: {e:#}", cmd.name());
            ExitCode::from(exit_code(&e))
        }
    }
}
