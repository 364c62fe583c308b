use std::path::PathBuf;

use nufft::fft::FftPlan;
use nufft::oracle::worst_grid;
use nufft::transforms::Plan2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::common::{gaussian, median, parse_real, timed};
use crate::error::CliError;
use crate::io::{self, real};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Transform sizes.
    #[arg(long = "n", value_delimiter = ',', num_args = 1.., default_value = "1024,4096,16384,65536")]
    sizes: Vec<usize>,
    /// Requested precisions.
    #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "2.2e-16")]
    eps: Vec<f64>,
    /// Perturbation of the worst-case grid.
    #[arg(long, value_parser = parse_real, default_value = "1/2")]
    gamma: f64,
    /// Repetitions; every time reported is the median.
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Median of `reps` timed runs after one untimed warm-up run.
fn median_time(reps: usize, mut f: impl FnMut()) -> f64 {
    f();
    let mut times: Vec<f64> = (0..reps).map(|_| timed(&mut f).1).collect();
    median(&mut times)
}

/// Rows `N,eps,K,plan_seconds,exec_seconds,fft_seconds_baseline,exec_over_fft_ratio`.
pub fn run(args: &Args, parallel: bool) -> Result<(), CliError> {
    if args.reps == 0 {
        return Err(CliError::Input("--reps must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut out = io::writer(args.out.as_ref())?;
    out.write_record([
        "N",
        "eps",
        "K",
        "plan_seconds",
        "exec_seconds",
        "fft_seconds_baseline",
        "exec_over_fft_ratio",
    ])?;
    let mut exec_times = vec![Vec::new(); args.eps.len()];
    for &n in &args.sizes {
        let x = worst_grid(n, args.gamma)?;
        let c = gaussian(n, &mut rng);
        let fft = FftPlan::new(n)?;
        let mut buf = c.clone();
        let mut scratch = fft.make_scratch();
        let fft_secs = median_time(args.reps, || {
            buf.copy_from_slice(&c);
            fft.forward_with_scratch(&mut buf, &mut scratch);
            std::hint::black_box(&buf);
        });
        for (i, &eps) in args.eps.iter().enumerate() {
            let mut plan_times = Vec::with_capacity(args.reps);
            let mut plan = None;
            for _ in 0..args.reps {
                let (p, secs) = timed(|| Plan2::new(&x, eps));
                plan_times.push(secs);
                plan = Some(p?);
            }
            let plan = plan.expect("at least one repetition");
            let exec_secs = median_time(args.reps, || {
                let f = if parallel { plan.execute_par(&c) } else { plan.execute(&c) };
                std::hint::black_box(f.expect("input length matches the plan"));
            });
            exec_times[i].push((n, exec_secs));
            out.write_record([
                n.to_string(),
                real(eps),
                plan.rank().to_string(),
                real(median(&mut plan_times)),
                real(exec_secs),
                real(fft_secs),
                real(exec_secs / fft_secs),
            ])?;
        }
    }
    out.flush()?;
    for (eps, times) in args.eps.iter().zip(&exec_times) {
        if let Some(growth) = doubling_factor(times) {
            eprintln!("bench: eps = {eps:e}: median exec time growth per doubling of N = {growth:.2}");
        }
    }
    Ok(())
}

/// Median over consecutive sizes of the time ratio per doubling of `N`.
fn doubling_factor(times: &[(usize, f64)]) -> Option<f64> {
    let mut factors: Vec<f64> = times
        .windows(2)
        .filter(|w| w[1].0 > w[0].0)
        .map(|w| {
            let doublings = (w[1].0 as f64 / w[0].0 as f64).log2();
            (w[1].1 / w[0].1).powf(1.0 / doublings)
        })
        .collect();
    (!factors.is_empty()).then(|| median(&mut factors))
}
