mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::output::Failure;

/// Simulate and analyse honeycomb charge-stability maps of parallel-coupled
/// double quantum dots.
#[derive(Debug, Parser)]
#[command(name = "dqdot", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize a conductance map, its graymap and the analytic geometry.
    Simulate(SimArgs),
    /// Extract device parameters from a map file.
    Extract(ExtractArgs),
    /// Simulate, extract and compare against the input network.
    Roundtrip(RoundtripArgs),
    /// Tabulate the coupling regime over a list of interdot couplings.
    Sweep(SweepArgs),
    /// Single-dot Coulomb diamond vertices.
    Diamonds(DiamondArgs),
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("span").required(true).args(["window", "cells"]))]
struct SimArgs {
    /// Capacitance network file (`key = value`, aF and mK).
    #[arg(long)]
    network: PathBuf,
    /// Gate window in volts: V_GL start, V_GL stop, V_GR start, V_GR stop.
    #[arg(long, num_args = 4, value_names = ["GL0", "GL1", "GR0", "GR1"], allow_negative_numbers = true)]
    window: Option<Vec<f64>>,
    /// Window of N×N cells computed from the network.
    #[arg(long)]
    cells: Option<u32>,
    /// Pixels per axis.
    #[arg(long, default_value_t = 401)]
    res: usize,
    /// Source–drain bias in volts.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    bias: f64,
    /// Gaussian noise, as a fraction of the map maximum.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ExtractArgs {
    /// Map file in `#DQDMAP v1` format.
    #[arg(long)]
    map: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct RoundtripArgs {
    #[command(flatten)]
    sim: SimArgs,
    /// Largest accepted relative error on any capacitance.
    #[arg(long, default_value_t = 0.03)]
    tolerance: f64,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("values").required(true).multiple(true).args(["cm", "ecm"]))]
struct SweepArgs {
    #[arg(long)]
    network: PathBuf,
    /// Interdot capacitances in aF.
    #[arg(long, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true)]
    cm: Option<Vec<f64>>,
    /// Target coupling energies in meV; each is converted to an interdot
    /// capacitance for the network's total capacitances.
    #[arg(long, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true)]
    ecm: Option<Vec<f64>>,
    /// Also write the table to `<dir>/sweep.tsv`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DiamondArgs {
    /// Gate capacitance in aF.
    #[arg(long)]
    c_gate: f64,
    /// Total capacitance in aF.
    #[arg(long)]
    c_sigma: f64,
    /// Source capacitance in aF.
    #[arg(long, default_value_t = 0.0)]
    c_source: f64,
    #[arg(long, default_value_t = 3)]
    count: u32,
    /// Also write the table to `<dir>/diamonds.tsv`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => commands::simulate(&a).map(|_| ()),
        Command::Extract(a) => commands::extract(&a),
        Command::Roundtrip(a) => commands::roundtrip(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Diamonds(a) => commands::diamonds(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, message }) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}
