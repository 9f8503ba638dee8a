//! `sk2d`: construct, solve, transport and check special Kähler structures
//! with isolated singularities.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical non-convergence,
//! 1 anything else (I/O, internal errors).

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Family(a) => commands::family(a),
        Command::SolveKw(a) => commands::solve_kw(a),
        Command::Holonomy(a) => commands::holonomy(a),
        Command::Classify(a) => commands::classify(a),
        Command::Asymptotics(a) => commands::asymptotics(a),
        Command::GaussBonnet(a) => commands::gauss_bonnet(a),
        Command::P1(a) => commands::p1(a),
        Command::Verify(a) => commands::verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sk2d: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

