//! `nufft`: nonuniform FFTs, accuracy sweeps, timing tables and CG iteration
//! studies from the command line. Every command writes CSV, to `--out` or
//! standard output; diagnostics go to standard error.
//!
//! Exit codes: 0 success, 1 verification failure, 2 I/O or malformed input,
//! 3 input outside the domain of the operation.

mod bench;
mod cgstudy;
mod common;
mod error;
mod io;
mod transform;
mod verify;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "nufft", version, about = "Nonuniform fast Fourier transforms", long_about = None)]
struct Cli {
    /// Worker threads for the parallel execution paths; 1 runs sequentially.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Plan and execute one transform on CSV inputs.
    Transform(transform::Args),
    /// Error sweep against the direct sum on worst-case grids.
    Verify(verify::Args),
    /// Planning and execution times against a single FFT.
    Bench(bench::Args),
    /// CG iteration counts of the inverse type-II transform.
    Cgstudy(cgstudy::Args),
}

fn run(cli: Cli) -> Result<(), CliError> {
    if cli.threads == 0 {
        return Err(CliError::Input("--threads must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .map_err(|e| CliError::Input(format!("cannot start thread pool: {e}")))?;
    let parallel = cli.threads > 1;
    match cli.command {
        Command::Transform(args) => transform::run(&args, parallel),
        Command::Verify(args) => verify::run(&args),
        Command::Bench(args) => bench::run(&args, parallel),
        Command::Cgstudy(args) => cgstudy::run(&args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nufft: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
