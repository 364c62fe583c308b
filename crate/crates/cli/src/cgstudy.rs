use std::path::PathBuf;

use clap::ValueEnum;
use nufft::inverse::{default_max_iter, InverseNufft2, DEFAULT_TOL};
use nufft::oracle::{perturbed_grid, worst_grid};
use nufft::transforms::Plan2;
use nufft::{NufftError, EPS_DOUBLE};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::common::{gaussian, parse_real};
use crate::error::CliError;
use crate::io::{self, real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Grid {
    /// `x_j = (j + γ u_j) / N` with `u_j` uniform on `[-1, 1]`.
    Random,
    /// Every sample at distance `γ` from its node.
    Worst,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Transform sizes.
    #[arg(long = "n", value_delimiter = ',', num_args = 1.., default_value = "1024")]
    sizes: Vec<usize>,
    /// Grid perturbations in `[0, 1/2)`, decimals or fractions like 7/16.
    #[arg(long, value_delimiter = ',', num_args = 1.., value_parser = parse_real, default_value = "0,1/32,1/8,7/16")]
    gamma: Vec<f64>,
    /// Relative residual at which CG stops.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Precision of the forward plans.
    #[arg(long, default_value_t = EPS_DOUBLE)]
    eps: f64,
    /// Runs per (N, gamma), each with its own grid and right-hand side.
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = Grid::Random)]
    grid: Grid,
    /// Iteration cap; defaults to max(100, 4 √N).
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Rows `N,gamma,iterations,converged`, one per trial. Non-convergence is
/// recorded, not fatal.
pub fn run(args: &Args) -> Result<(), CliError> {
    if let Some(g) = args.gamma.iter().find(|g| !(0.0..0.5).contains(*g)) {
        return Err(CliError::Domain(format!("gamma = {g} is outside [0, 1/2)")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut out = io::writer(args.out.as_ref())?;
    out.write_record(["N", "gamma", "iterations", "converged"])?;
    for &n in &args.sizes {
        let max_iter = args.max_iter.unwrap_or_else(|| default_max_iter(n));
        for &gamma in &args.gamma {
            for _ in 0..args.trials {
                let x = match args.grid {
                    Grid::Worst => worst_grid(n, gamma)?,
                    Grid::Random => {
                        let offsets: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
                        perturbed_grid(n, gamma, &offsets)?
                    }
                };
                let solver = InverseNufft2::new(Plan2::new(&x, args.eps)?)?;
                let f = gaussian(n, &mut rng);
                let (iterations, converged) = match solver.solve(&f, args.tol, max_iter) {
                    Ok(report) => (report.iterations, true),
                    Err(NufftError::NotConverged(report)) => (report.iterations, false),
                    Err(e) => return Err(e.into()),
                };
                out.write_record([n.to_string(), real(gamma), iterations.to_string(), converged.to_string()])?;
            }
        }
    }
    out.flush()?;
    Ok(())
}
