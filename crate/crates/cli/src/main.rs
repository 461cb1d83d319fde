#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod error;
mod output;

use commands::{bound::BoundArgs, dirac_check::DiracCheckArgs, pt_scan::PtScanArgs, scatter::ScatterArgs};

/// Qubit-hologram solvers: PT phase scans, neutron scattering, domain-wall bound states and
/// Dirac operator checks.
#[derive(Parser)]
#[command(name = "hologram", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenmomenta and PT phase of the 2x2 effective Hamiltonian over an omega range (CSV on stdout).
    PtScan(PtScanArgs),
    /// Phase shifts, amplitudes and cross sections for a potential file.
    Scatter(ScatterArgs),
    /// Energy scan and shooting solve for the domain-wall zero mode.
    Bound(BoundArgs),
    /// Residuals of the parity, mirror and PT identities over a seeded random sweep.
    DiracCheck(DiracCheckArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::PtScan(a) => commands::pt_scan::run(a),
        Command::Scatter(a) => commands::scatter::run(a),
        Command::Bound(a) => commands::bound::run(a),
        Command::DiracCheck(a) => commands::dirac_check::run(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message.trim_end());
            ExitCode::from(e.code)
        }
    }
}
