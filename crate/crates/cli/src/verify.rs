use std::path::PathBuf;

use clap::ValueEnum;
use nufft::oracle::{nudft_direct, worst_grid};
use nufft::transforms::Plan2;
use nufft::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::common::{diff_norm, gaussian, norm, parse_real};
use crate::error::CliError;
use crate::io::{self, real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Coefficients {
    /// Independent complex Gaussian entries.
    Gaussian,
    /// Gaussian entries scaled by `1 / (k + 1)²`.
    Decaying,
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Transform sizes.
    #[arg(long = "n", value_delimiter = ',', num_args = 1.., default_value = "16,64,256,1024")]
    sizes: Vec<usize>,
    /// Perturbations of the worst-case grid, decimals or fractions like 1/32.
    #[arg(long, value_delimiter = ',', num_args = 1.., value_parser = parse_real, default_value = "0,1/32,1/8,1/2")]
    gamma: Vec<f64>,
    /// Requested precisions.
    #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "2.2e-16,1.2e-7,9.8e-4")]
    eps: Vec<f64>,
    /// Random coefficient vectors per (N, gamma, eps).
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Coefficients::Gaussian)]
    mode: Coefficients,
    /// Output CSV; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn coefficients(n: usize, mode: Coefficients, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    let mut c = gaussian(n, rng);
    if mode == Coefficients::Decaying {
        for (k, z) in c.iter_mut().enumerate() {
            *z /= ((k + 1) * (k + 1)) as f64;
        }
    }
    c
}

/// Rows `N,gamma,eps,K,rel_error,bound,pass` with `rel_error = ‖f − f_direct‖₂ / ‖c‖₂`
/// and `bound = N·eps`. Fails (exit 1) if any row misses its bound, after the
/// table is written.
pub fn run(args: &Args) -> Result<(), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut out = io::writer(args.out.as_ref())?;
    out.write_record(["N", "gamma", "eps", "K", "rel_error", "bound", "pass"])?;
    let (mut rows, mut failed) = (0, 0);
    for &n in &args.sizes {
        let freqs: Vec<f64> = (0..n).map(|k| k as f64).collect();
        for &gamma in &args.gamma {
            let x = worst_grid(n, gamma)?;
            for &eps in &args.eps {
                let plan = Plan2::new(&x, eps)?;
                for _ in 0..args.trials {
                    let c = coefficients(n, args.mode, &mut rng);
                    let exact = nudft_direct(&x, &freqs, &c)?;
                    let err = diff_norm(&plan.execute(&c)?, &exact) / norm(&c);
                    let bound = n as f64 * eps;
                    let pass = err <= bound;
                    rows += 1;
                    failed += usize::from(!pass);
                    out.write_record([
                        n.to_string(),
                        real(gamma),
                        real(eps),
                        plan.rank().to_string(),
                        real(err),
                        real(bound),
                        pass.to_string(),
                    ])?;
                }
            }
        }
    }
    out.flush()?;
    eprintln!("verify: {} of {rows} rows within N eps", rows - failed);
    if failed > 0 {
        return Err(CliError::Failed(format!("{failed} of {rows} rows exceed the bound N eps")));
    }
    Ok(())
}
