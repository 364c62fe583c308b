use std::path::PathBuf;

use clap::ValueEnum;
use nufft::fft::fft_forward;
use nufft::inverse::{default_max_iter, CgReport, InverseNufft1, InverseNufft2, DEFAULT_TOL};
use nufft::transform2d::Plan2D;
use nufft::transforms::{Plan1, Plan2, Plan3, SampleSet};
use nufft::{Complex64, NufftError, EPS_DOUBLE};

use crate::common::timed;
use crate::error::CliError;
use crate::io::{self, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// frequencies (omega), coefficients (re,im)
    #[value(name = "1")]
    One,
    /// samples (x), coefficients (re,im)
    #[value(name = "2")]
    Two,
    /// samples (x), frequencies (omega), coefficients (re,im)
    #[value(name = "3")]
    Three,
    /// samples (x,y), coefficients (row,col,re,im)
    #[value(name = "2d2")]
    TwoD,
    /// frequencies (omega), values (re,im)
    #[value(name = "inv1")]
    Inv1,
    /// samples (x), values (re,im)
    #[value(name = "inv2")]
    Inv2,
}

impl Kind {
    fn inputs(self) -> &'static [&'static str] {
        match self {
            Kind::One => &["frequencies", "coefficients"],
            Kind::Two => &["samples", "coefficients"],
            Kind::Three => &["samples", "frequencies", "coefficients"],
            Kind::TwoD => &["samples", "coefficients"],
            Kind::Inv1 => &["frequencies", "values"],
            Kind::Inv2 => &["samples", "values"],
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Transform type; the input files follow the order shown for each.
    #[arg(long = "type", value_enum)]
    kind: Kind,
    /// Input CSV files.
    #[arg(long = "in", num_args = 1.., required = true)]
    inputs: Vec<PathBuf>,
    /// Requested precision.
    #[arg(long, default_value_t = EPS_DOUBLE)]
    eps: f64,
    /// Output CSV; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Types 1 and 2 on an equispaced grid only: run a single plain FFT.
    #[arg(long)]
    plain_fft: bool,
    /// Rows of the 2D coefficient matrix (frequencies along y).
    #[arg(long)]
    m: Option<usize>,
    /// Columns of the 2D coefficient matrix (frequencies along x).
    #[arg(long)]
    n: Option<usize>,
    /// Relative residual at which the inverse transforms stop.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// CG iteration cap for the inverse transforms.
    #[arg(long)]
    max_iter: Option<usize>,
    /// Unused: transforms involve no randomness.
    #[arg(long = "seed", default_value_t = 0)]
    _seed: u64,
}

pub fn run(args: &Args, parallel: bool) -> Result<(), CliError> {
    let expected = args.kind.inputs();
    if args.inputs.len() != expected.len() {
        return Err(CliError::Input(format!(
            "--type {} takes {} input files ({}), got {}",
            args.kind.to_possible_value().map_or_else(String::new, |v| v.get_name().to_string()),
            expected.len(),
            expected.join(", "),
            args.inputs.len()
        )));
    }
    if args.plain_fft && !matches!(args.kind, Kind::One | Kind::Two) {
        return Err(CliError::Input("--plain-fft applies to types 1 and 2 only".into()));
    }
    let tables = args
        .inputs
        .iter()
        .map(|p| Table::read(p))
        .collect::<Result<Vec<_>, _>>()?;
    let (result, failure) = match args.kind {
        Kind::One => (type1(args, &tables, parallel)?, None),
        Kind::Two => (type2(args, &tables, parallel)?, None),
        Kind::Three => (type3(args, &tables, parallel)?, None),
        Kind::TwoD => (type2d(args, &tables, parallel)?, None),
        Kind::Inv1 | Kind::Inv2 => inverse(args, &tables)?,
    };
    let mut out = io::writer(args.out.as_ref())?;
    io::write_complex(&mut out, &result)?;
    failure.map_or(Ok(()), Err)
}

fn report(what: &str, n: usize, rank: usize, gamma: f64, plan: f64, exec: f64) {
    eprintln!("{what}: N = {n}, K = {rank}, gamma = {gamma:.6}, plan {plan:.3e} s, exec {exec:.3e} s");
}

/// The plain FFT stands in for the transform only on the equispaced grid in
/// natural order.
fn plain_fft(samples: &SampleSet, c: &[Complex64], what: &str) -> Result<Vec<Complex64>, CliError> {
    let natural = samples.t().iter().enumerate().all(|(j, &t)| t == j);
    if samples.gamma() != 0.0 || !natural {
        return Err(CliError::Domain(format!(
            "--plain-fft needs the {what} on the equispaced grid in order"
        )));
    }
    let (f, secs) = timed(|| fft_forward(c));
    eprintln!("plain FFT: N = {}, exec {secs:.3e} s", c.len());
    Ok(f?)
}

fn type1(args: &Args, t: &[Table], parallel: bool) -> Result<Vec<Complex64>, CliError> {
    let omega = t[0].reals("omega")?;
    let c = t[1].complex()?;
    if omega.len() != c.len() {
        return Err(NufftError::LengthMismatch { expected: omega.len(), found: c.len() }.into());
    }
    let (plan, plan_secs) = timed(|| Plan1::new(&omega, args.eps));
    let plan = plan?;
    if args.plain_fft {
        return plain_fft(plan.inner().samples(), &c, "frequencies");
    }
    let (f, secs) = timed(|| if parallel { plan.execute_par(&c) } else { plan.execute(&c) });
    report("type 1", plan.len(), plan.rank(), plan.gamma(), plan_secs, secs);
    Ok(f?)
}

fn type2(args: &Args, t: &[Table], parallel: bool) -> Result<Vec<Complex64>, CliError> {
    let x = t[0].reals("x")?;
    let c = t[1].complex()?;
    if x.len() != c.len() {
        return Err(NufftError::LengthMismatch { expected: x.len(), found: c.len() }.into());
    }
    let (plan, plan_secs) = timed(|| Plan2::new(&x, args.eps));
    let plan = plan?;
    if args.plain_fft {
        return plain_fft(plan.samples(), &c, "samples");
    }
    let (f, secs) = timed(|| if parallel { plan.execute_par(&c) } else { plan.execute(&c) });
    report("type 2", plan.len(), plan.rank(), plan.gamma(), plan_secs, secs);
    Ok(f?)
}

fn type3(args: &Args, t: &[Table], parallel: bool) -> Result<Vec<Complex64>, CliError> {
    let x = t[0].reals("x")?;
    let omega = t[1].reals("omega")?;
    let c = t[2].complex()?;
    for len in [omega.len(), c.len()] {
        if len != x.len() {
            return Err(NufftError::LengthMismatch { expected: x.len(), found: len }.into());
        }
    }
    let (plan, plan_secs) = timed(|| Plan3::new(&x, &omega, args.eps));
    let plan = plan?;
    let (f, secs) = timed(|| if parallel { plan.execute_par(&c) } else { plan.execute(&c) });
    report("type 3", plan.len(), plan.rank(), plan.samples().gamma(), plan_secs, secs);
    eprintln!("type 3: {} type-1 transforms, {} FFTs", plan.effective_rank(), plan.fft_count());
    Ok(f?)
}

fn type2d(args: &Args, t: &[Table], parallel: bool) -> Result<Vec<Complex64>, CliError> {
    let x = t[0].reals("x")?;
    let y = t[0].reals("y")?;
    let c = t[1].matrix(args.m, args.n)?;
    let (plan, plan_secs) = timed(|| Plan2D::new(&x, &y, c.rows(), c.cols(), args.eps));
    let plan = plan?;
    let (f, secs) = timed(|| if parallel { plan.execute_par(&c) } else { plan.execute(&c) });
    eprintln!(
        "2d type 2: {} samples, {} x {} grid, K = {} x {}, gamma = ({:.6}, {:.6}), plan {plan_secs:.3e} s, exec {secs:.3e} s",
        plan.len(),
        plan.rows(),
        plan.cols(),
        plan.rank_x(),
        plan.rank_y(),
        plan.gamma_x(),
        plan.gamma_y()
    );
    Ok(f?)
}

/// The solution, and a failure when CG stopped at the iteration cap. The best
/// iterate is written either way.
fn inverse(args: &Args, t: &[Table]) -> Result<(Vec<Complex64>, Option<CliError>), CliError> {
    let f = t[1].complex()?;
    let (solver, plan_secs) = timed(|| -> Result<_, CliError> {
        Ok(match args.kind {
            Kind::Inv1 => Solver::One(InverseNufft1::new(Plan1::new(&t[0].reals("omega")?, args.eps)?)?),
            _ => Solver::Two(InverseNufft2::new(Plan2::new(&t[0].reals("x")?, args.eps)?)?),
        })
    });
    let solver = solver?;
    let n = solver.len();
    if f.len() != n {
        return Err(NufftError::LengthMismatch { expected: n, found: f.len() }.into());
    }
    let max_iter = args.max_iter.unwrap_or_else(|| default_max_iter(n));
    let (result, secs) = timed(|| solver.solve(&f, args.tol, max_iter));
    let (name, rank, gamma) = solver.describe();
    report(name, n, rank, gamma, plan_secs, secs);
    match result {
        Ok(r) => {
            eprintln!("{name}: {} CG iterations, relative residual {:.3e}", r.iterations, r.relative_residual);
            Ok((r.solution, None))
        }
        Err(NufftError::NotConverged(r)) => {
            let failure = CliError::Failed(format!(
                "{name}: no convergence in {} CG iterations (relative residual {:.3e}); wrote the best iterate",
                r.iterations, r.relative_residual
            ));
            Ok((r.solution, Some(failure)))
        }
        Err(e) => Err(e.into()),
    }
}

enum Solver {
    One(InverseNufft1),
    Two(InverseNufft2),
}

impl Solver {
    fn len(&self) -> usize {
        match self {
            Solver::One(s) => s.plan().len(),
            Solver::Two(s) => s.plan().len(),
        }
    }

    fn describe(&self) -> (&'static str, usize, f64) {
        match self {
            Solver::One(s) => ("inverse type 1", s.plan().rank(), s.plan().gamma()),
            Solver::Two(s) => ("inverse type 2", s.plan().rank(), s.plan().gamma()),
        }
    }

    fn solve(&self, f: &[Complex64], tol: f64, max_iter: usize) -> nufft::Result<CgReport> {
        match self {
            Solver::One(s) => s.solve(f, tol, max_iter),
            Solver::Two(s) => s.solve(f, tol, max_iter),
        }
    }
}
