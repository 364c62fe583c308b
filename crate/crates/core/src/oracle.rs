//! Brute-force references and test inputs.
//!
//! The direct sums reduce each phase `x·ω` modulo 1 with an error-free product
//! before taking sines and cosines, and accumulate with Neumaier compensation,
//! so they are accurate to a few ulps of `Σ |c_k|` for the sizes used here.

use num_complex::Complex64;

use crate::error::{check_finite, check_finite_reals, check_len, NufftError, Result};
use crate::fft::ComplexMatrix;
use crate::transforms::normalize_samples;

/// Largest dimension the dense builders accept.
pub const DENSE_LIMIT: usize = 4096;

/// Fractional part of `x·w` in `[-1/2, 1/2]`, including the rounding error of
/// the product.
fn phase_frac(x: f64, w: f64) -> f64 {
    let p = x * w;
    let e = x.mul_add(w, -p);
    (p - p.round()) + e
}

/// `exp(-2πi x w)` with the argument reduced modulo 1.
pub fn twiddle(x: f64, w: f64) -> Complex64 {
    let (s, c) = (2.0 * std::f64::consts::PI * phase_frac(x, w)).sin_cos();
    Complex64::new(c, -s)
}

#[derive(Debug, Default, Clone, Copy)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated complex accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    re: Neumaier,
    im: Neumaier,
}

impl CompensatedSum {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// `f_j = Σ_k c_k exp(-2πi x_j ω_k)` by direct summation. `omega` and `c` must
/// have the same length; `x` may have any length.
pub fn nudft_direct(x: &[f64], omega: &[f64], c: &[Complex64]) -> Result<Vec<Complex64>> {
    check_len(omega.len(), c.len())?;
    check_finite_reals(x, "samples")?;
    check_finite_reals(omega, "frequencies")?;
    check_finite(c, "coefficients")?;
    Ok(x.iter()
        .map(|&xj| {
            let mut acc = CompensatedSum::default();
            for (&w, ck) in omega.iter().zip(c) {
                acc.add(ck * twiddle(xj, w));
            }
            acc.value()
        })
        .collect())
}

/// Two-dimensional type-II sum
/// `f_j = Σ_{k1<m} Σ_{k2<n} C[k1, k2] exp(-2πi (k1 y_j + k2 x_j))`
/// for an `m × n` coefficient matrix.
pub fn nudft2d_direct(x: &[f64], y: &[f64], c: &ComplexMatrix) -> Result<Vec<Complex64>> {
    check_len(x.len(), y.len())?;
    check_finite_reals(x, "x samples")?;
    check_finite_reals(y, "y samples")?;
    check_finite(c.as_slice(), "coefficients")?;
    Ok(x.iter()
        .zip(y)
        .map(|(&xj, &yj)| {
            let row_phase: Vec<Complex64> = (0..c.rows()).map(|k1| twiddle(yj, k1 as f64)).collect();
            let col_phase: Vec<Complex64> = (0..c.cols()).map(|k2| twiddle(xj, k2 as f64)).collect();
            let mut acc = CompensatedSum::default();
            for (k1, rp) in row_phase.iter().enumerate() {
                for (k2, cp) in col_phase.iter().enumerate() {
                    acc.add(c.get(k1, k2) * (rp * cp));
                }
            }
            acc.value()
        })
        .collect())
}

/// Samples at maximal distance `gamma` from their nodes:
/// `(j + γ)/N` for `j ≤ ⌊N/2⌋`, `(j - γ)/N` otherwise.
pub fn worst_grid(n: usize, gamma: f64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(NufftError::InvalidArgument("worst grid needs N >= 1".into()));
    }
    if !(0.0..=0.5).contains(&gamma) {
        return Err(NufftError::InvalidArgument(format!(
            "gamma must lie in [0, 1/2], got {gamma}"
        )));
    }
    let x: Vec<f64> = (0..n)
        .map(|j| {
            let shift = if j <= n / 2 { gamma } else { -gamma };
            (j as f64 + shift) / n as f64
        })
        .collect();
    normalize_samples(&x)
}

/// `x_j = (j + gamma · offsets_j) / N` with `offsets_j ∈ [-1, 1]`, reduced into
/// `[0, 1)`.
pub fn perturbed_grid(n: usize, gamma: f64, offsets: &[f64]) -> Result<Vec<f64>> {
    check_len(n, offsets.len())?;
    if !(0.0..=0.5).contains(&gamma) {
        return Err(NufftError::InvalidArgument(format!(
            "gamma must lie in [0, 1/2], got {gamma}"
        )));
    }
    if let Some(j) = offsets.iter().position(|o| !(-1.0..=1.0).contains(o)) {
        return Err(NufftError::InvalidArgument(format!(
            "offset {j} = {} lies outside [-1, 1]",
            offsets[j]
        )));
    }
    let x: Vec<f64> = offsets
        .iter()
        .enumerate()
        .map(|(j, o)| (j as f64 + gamma * o) / n as f64)
        .collect();
    normalize_samples(&x)
}

fn check_dense(rows: usize, cols: usize) -> Result<()> {
    if rows > DENSE_LIMIT || cols > DENSE_LIMIT {
        return Err(NufftError::InvalidArgument(format!(
            "dense matrix {rows} x {cols} exceeds the {DENSE_LIMIT} limit"
        )));
    }
    Ok(())
}

/// Dense matrix with entries `exp(-2πi x_j ω_k)`.
pub fn dense_nudft_matrix(x: &[f64], omega: &[f64]) -> Result<ComplexMatrix> {
    check_dense(x.len(), omega.len())?;
    check_finite_reals(x, "samples")?;
    check_finite_reals(omega, "frequencies")?;
    Ok(ComplexMatrix::from_fn(x.len(), omega.len(), |j, k| twiddle(x[j], omega[k])))
}

/// Dense type-II matrix, entries `exp(-2πi x_j k)` for `k < n`.
pub fn dense_nudft2_matrix(x: &[f64], n: usize) -> Result<ComplexMatrix> {
    let omega: Vec<f64> = (0..n).map(|k| k as f64).collect();
    dense_nudft_matrix(x, &omega)
}

/// Dense two-dimensional type-II matrix acting on the column-major
/// vectorization of an `m × n` coefficient matrix: column `k1 + m·k2`.
pub fn dense_nudft2d_matrix(x: &[f64], y: &[f64], m: usize, n: usize) -> Result<ComplexMatrix> {
    check_len(x.len(), y.len())?;
    check_dense(x.len(), m * n)?;
    Ok(ComplexMatrix::from_fn(x.len(), m * n, |j, col| {
        let (k1, k2) = (col % m, col / m);
        twiddle(y[j], k1 as f64) * twiddle(x[j], k2 as f64)
    }))
}
