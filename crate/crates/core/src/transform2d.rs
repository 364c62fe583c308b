//! Two-dimensional type-II transform
//!
//! ```text
//! f_j = Σ_{k1<m} Σ_{k2<n} C[k1, k2] exp(-2πi (k1 y_j + k2 x_j))
//! ```
//!
//! for an `m × n` coefficient matrix and `N` samples `(x_j, y_j)`. `x` is
//! assigned to the `n`-grid (columns) and `y` to the `m`-grid (rows). With
//! rank-`K₁` factors along `x` and rank-`K₂` factors along `y`,
//!
//! ```text
//! f_j = Σ_{r1} Σ_{r2} ux_r1[j] uy_r2[j] · vec(F_m D(vy_r2) C D(vx_r1) F_n)[m·tx_j + ty_j]
//! ```
//!
//! where `vec` stacks columns. `C D(vx_r1) F_n` does not depend on `r2` and is
//! computed once per `r1`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::approx::{build_factors, LowRankFactors};
use crate::error::{check_epsilon, check_finite, check_len, NufftError, Result};
use crate::fft::{ComplexMatrix, FftPlan};
use crate::transforms::{normalize_samples, SampleSet};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Per-axis nearest-node assignment on an `m × n` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment2d {
    pub sx: Vec<usize>,
    pub sy: Vec<usize>,
    pub tx: Vec<usize>,
    pub ty: Vec<usize>,
    pub gamma_x: f64,
    pub gamma_y: f64,
}

/// Assign normalized samples: `x` to the `n`-grid, `y` to the `m`-grid.
pub fn grid_assign_2d(x: &[f64], y: &[f64], m: usize, n: usize) -> Result<Assignment2d> {
    let (sx, sy) = assign_axes(x, y, m, n)?;
    Ok(Assignment2d {
        sx: sx.s().to_vec(),
        sy: sy.s().to_vec(),
        tx: sx.t().to_vec(),
        ty: sy.t().to_vec(),
        gamma_x: sx.gamma(),
        gamma_y: sy.gamma(),
    })
}

fn assign_axes(x: &[f64], y: &[f64], m: usize, n: usize) -> Result<(SampleSet, SampleSet)> {
    if m == 0 || n == 0 {
        return Err(NufftError::InvalidArgument(format!(
            "grid dimensions must be at least 1, got {m} x {n}"
        )));
    }
    check_len(x.len(), y.len())?;
    Ok((SampleSet::new(x, n)?, SampleSet::new(y, m)?))
}

/// FFT batch counts of one execution.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExecStats {
    /// Batches of `m` row transforms of length `n`.
    pub row_batches: usize,
    /// Batches of `n` column transforms of length `m`.
    pub col_batches: usize,
}

/// Planned two-dimensional type-II transform.
#[derive(Debug, Clone)]
pub struct Plan2D {
    m: usize,
    n: usize,
    x: SampleSet,
    y: SampleSet,
    factors_x: LowRankFactors,
    factors_y: LowRankFactors,
    flat: Vec<usize>,
    row_fft: FftPlan,
    col_fft: FftPlan,
}

impl Plan2D {
    /// Plan for raw samples `(x_j, y_j)`, reduced into `[0, 1)²`.
    pub fn new(x_raw: &[f64], y_raw: &[f64], m: usize, n: usize, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        if x_raw.is_empty() {
            return Err(NufftError::InvalidArgument("need at least one sample".into()));
        }
        let (x, y) = assign_axes(&normalize_samples(x_raw)?, &normalize_samples(y_raw)?, m, n)?;
        let cols: Vec<f64> = (0..n).map(|k| k as f64 / n as f64).collect();
        let rows: Vec<f64> = (0..m).map(|k| k as f64 / m as f64).collect();
        let factors_x = build_factors(x.delta(), x.gamma(), &cols, epsilon)?;
        let factors_y = build_factors(y.delta(), y.gamma(), &rows, epsilon)?;
        let flat = x.t().iter().zip(y.t()).map(|(tx, ty)| m * tx + ty).collect();
        Ok(Self {
            m,
            n,
            x,
            y,
            factors_x,
            factors_y,
            flat,
            row_fft: FftPlan::new(n)?,
            col_fft: FftPlan::new(m)?,
        })
    }

    pub fn rows(&self) -> usize {
        self.m
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    /// Number of samples `N`.
    pub fn len(&self) -> usize {
        self.flat.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn samples_x(&self) -> &SampleSet {
        &self.x
    }

    pub fn samples_y(&self) -> &SampleSet {
        &self.y
    }

    pub fn rank_x(&self) -> usize {
        self.factors_x.rank()
    }

    pub fn rank_y(&self) -> usize {
        self.factors_y.rank()
    }

    pub fn gamma_x(&self) -> f64 {
        self.x.gamma()
    }

    pub fn gamma_y(&self) -> f64 {
        self.y.gamma()
    }

    /// Column-major index `m·tx_j + ty_j` of each sample.
    pub fn flat_index(&self) -> &[usize] {
        &self.flat
    }

    fn check_input(&self, c: &ComplexMatrix) -> Result<()> {
        if c.rows() != self.m || c.cols() != self.n {
            return Err(NufftError::InvalidArgument(format!(
                "coefficient matrix is {} x {}, plan expects {} x {}",
                c.rows(),
                c.cols(),
                self.m,
                self.n
            )));
        }
        check_finite(c.as_slice(), "coefficients")
    }

    /// `C D(vx_r1) F_n`, row-major.
    fn row_stage(&self, r1: usize, c: &ComplexMatrix, scratch: &mut [Complex64]) -> Vec<Complex64> {
        let vx = self.factors_x.v(r1);
        let mut w: Vec<Complex64> = c
            .as_slice()
            .chunks(self.n)
            .flat_map(|row| row.iter().zip(vx).map(|(a, b)| a * b))
            .collect();
        self.row_fft.forward_with_scratch(&mut w, scratch);
        w
    }

    /// `F_m D(vy_r2) W`, column-major.
    fn col_stage(&self, r2: usize, w: &[Complex64], buf: &mut [Complex64], scratch: &mut [Complex64]) {
        let vy = self.factors_y.v(r2);
        for k2 in 0..self.n {
            for k1 in 0..self.m {
                buf[k2 * self.m + k1] = vy[k1] * w[k1 * self.n + k2];
            }
        }
        self.col_fft.forward_with_scratch(buf, scratch);
    }

    fn merge(&self, r1: usize, r2: usize, z: &[Complex64], out: &mut [Complex64]) {
        let (ux, uy) = (self.factors_x.u(r1), self.factors_y.u(r2));
        for (j, o) in out.iter_mut().enumerate() {
            *o += ux[j] * uy[j] * z[self.flat[j]];
        }
    }

    fn scratch(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        (self.row_fft.make_scratch(), self.col_fft.make_scratch())
    }

    pub fn execute(&self, c: &ComplexMatrix) -> Result<Vec<Complex64>> {
        Ok(self.execute_with_stats(c)?.0)
    }

    /// [`execute`](Self::execute), also returning the FFT batch counts.
    pub fn execute_with_stats(&self, c: &ComplexMatrix) -> Result<(Vec<Complex64>, ExecStats)> {
        self.check_input(c)?;
        let (mut row_scratch, mut col_scratch) = self.scratch();
        let mut stats = ExecStats::default();
        let mut out = vec![ZERO; self.len()];
        let mut z = vec![ZERO; self.m * self.n];
        for r1 in 0..self.rank_x() {
            let w = self.row_stage(r1, c, &mut row_scratch);
            stats.row_batches += 1;
            for r2 in 0..self.rank_y() {
                self.col_stage(r2, &w, &mut z, &mut col_scratch);
                stats.col_batches += 1;
                self.merge(r1, r2, &z, &mut out);
            }
        }
        Ok((out, stats))
    }

    /// The same sum with the row stage recomputed for every `(r1, r2)`.
    /// Reference for the reuse in [`execute`](Self::execute).
    pub fn execute_without_reuse(&self, c: &ComplexMatrix) -> Result<(Vec<Complex64>, ExecStats)> {
        self.check_input(c)?;
        let (mut row_scratch, mut col_scratch) = self.scratch();
        let mut stats = ExecStats::default();
        let mut out = vec![ZERO; self.len()];
        let mut z = vec![ZERO; self.m * self.n];
        for r1 in 0..self.rank_x() {
            for r2 in 0..self.rank_y() {
                let w = self.row_stage(r1, c, &mut row_scratch);
                stats.row_batches += 1;
                self.col_stage(r2, &w, &mut z, &mut col_scratch);
                stats.col_batches += 1;
                self.merge(r1, r2, &z, &mut out);
            }
        }
        Ok((out, stats))
    }

    /// Parallel over `r1`, merged in the sequential order. Bit-identical to
    /// [`execute`](Self::execute).
    pub fn execute_par(&self, c: &ComplexMatrix) -> Result<Vec<Complex64>> {
        self.check_input(c)?;
        let gathered: Vec<Vec<Vec<Complex64>>> = (0..self.rank_x())
            .into_par_iter()
            .map(|r1| {
                let (mut row_scratch, mut col_scratch) = self.scratch();
                let w = self.row_stage(r1, c, &mut row_scratch);
                let mut z = vec![ZERO; self.m * self.n];
                (0..self.rank_y())
                    .map(|r2| {
                        self.col_stage(r2, &w, &mut z, &mut col_scratch);
                        self.flat.iter().map(|&i| z[i]).collect()
                    })
                    .collect()
            })
            .collect();
        let mut out = vec![ZERO; self.len()];
        for (r1, per_r2) in gathered.iter().enumerate() {
            for (r2, g) in per_r2.iter().enumerate() {
                let (ux, uy) = (self.factors_x.u(r1), self.factors_y.u(r2));
                for (j, o) in out.iter_mut().enumerate() {
                    *o += ux[j] * uy[j] * g[j];
                }
            }
        }
        Ok(out)
    }
}
