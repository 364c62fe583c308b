//! Uniform FFT conventions used throughout the crate.
//!
//! Forward: `y_j = Σ_k v_k exp(-2πi jk/N)`, no scaling.
//! Inverse: `v_k = (1/N) Σ_j y_j exp(+2πi jk/N)`.
//!
//! The backend is `rustfft`, which handles every length (Bluestein or Rader for
//! awkward primes), so there is no separate fallback path here.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{check_finite, check_len, NufftError, Result};

/// A planned pair of forward/inverse transforms of one length.
///
/// Planning is done once; executing is `&self` and thread-safe as long as every
/// caller owns its buffers.
#[derive(Clone)]
pub struct FftPlan {
    len: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch_len: usize,
}

impl fmt::Debug for FftPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FftPlan").field("len", &self.len).finish()
    }
}

impl FftPlan {
    pub fn new(len: usize) -> Result<Self> {
        if len == 0 {
            return Err(NufftError::InvalidArgument(
                "FFT length must be at least 1".into(),
            ));
        }
        let mut planner = FftPlanner::<f64>::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Ok(Self {
            len,
            forward,
            inverse,
            scratch_len,
        })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Scratch buffer sized for the `*_with_scratch` methods.
    pub fn make_scratch(&self) -> Vec<Complex64> {
        vec![Complex64::new(0.0, 0.0); self.scratch_len]
    }

    /// Unnormalized forward transform of every length-`len` chunk of `buf`.
    pub fn forward_with_scratch(&self, buf: &mut [Complex64], scratch: &mut [Complex64]) {
        debug_assert_eq!(buf.len() % self.len, 0);
        self.forward.process_with_scratch(buf, scratch);
    }

    /// `N · F⁻¹` applied to every chunk, i.e. multiplication by `conj(F)`.
    pub fn conj_forward_with_scratch(&self, buf: &mut [Complex64], scratch: &mut [Complex64]) {
        debug_assert_eq!(buf.len() % self.len, 0);
        self.inverse.process_with_scratch(buf, scratch);
    }

    pub fn forward_in_place(&self, buf: &mut [Complex64]) {
        let mut scratch = self.make_scratch();
        self.forward_with_scratch(buf, &mut scratch);
    }

    /// Normalized inverse (includes the `1/N`).
    pub fn inverse_in_place(&self, buf: &mut [Complex64]) {
        let mut scratch = self.make_scratch();
        self.conj_forward_with_scratch(buf, &mut scratch);
        let scale = 1.0 / self.len as f64;
        buf.iter_mut().for_each(|z| *z *= scale);
    }
}

fn check_input(v: &[Complex64]) -> Result<()> {
    if v.is_empty() {
        return Err(NufftError::InvalidArgument("empty input vector".into()));
    }
    check_finite(v, "input")
}

/// `F v` with `F_jk = exp(-2πi jk/N)`.
pub fn fft_forward(v: &[Complex64]) -> Result<Vec<Complex64>> {
    check_input(v)?;
    let plan = FftPlan::new(v.len())?;
    let mut out = v.to_vec();
    plan.forward_in_place(&mut out);
    Ok(out)
}

/// `F⁻¹ v`, the exact inverse of [`fft_forward`].
pub fn fft_inverse(v: &[Complex64]) -> Result<Vec<Complex64>> {
    check_input(v)?;
    let plan = FftPlan::new(v.len())?;
    let mut out = v.to_vec();
    plan.inverse_in_place(&mut out);
    Ok(out)
}

/// `Fᵀ v` evaluated as `conj(N · F⁻¹ conj(v))`.
///
/// `F` is symmetric so this equals [`fft_forward`]; the point of keeping the
/// inverse-FFT route is that the type-I transform is phrased through it.
pub fn fft_transpose(v: &[Complex64]) -> Result<Vec<Complex64>> {
    check_input(v)?;
    let n = v.len() as f64;
    let conj: Vec<Complex64> = v.iter().map(|z| z.conj()).collect();
    Ok(fft_inverse(&conj)?
        .into_iter()
        .map(|z| (z * n).conj())
        .collect())
}

/// Dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        check_len(rows * cols, data.len())?;
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.cols + col] = value;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// Column-major flattening: entry `(row, col)` lands at `rows * col + row`.
    pub fn to_column_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                out.push(self.get(r, c));
            }
        }
        out
    }

    /// Matrix-vector product (dense, for tests and small problems).
    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.cols, v.len())?;
        Ok(self
            .data
            .chunks(self.cols)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Planned `m × n` two-dimensional forward FFT: length-`n` transforms along every
/// row followed by length-`m` transforms along every column.
#[derive(Debug, Clone)]
pub struct Fft2dPlan {
    rows: FftPlan,
    cols: FftPlan,
}

impl Fft2dPlan {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        Ok(Self {
            rows: FftPlan::new(n)?,
            cols: FftPlan::new(m)?,
        })
    }

    /// Plan transforming along each row (length `n`).
    pub fn row_plan(&self) -> &FftPlan {
        &self.rows
    }

    /// Plan transforming along each column (length `m`).
    pub fn col_plan(&self) -> &FftPlan {
        &self.cols
    }

    pub fn forward(&self, c: &ComplexMatrix) -> Result<ComplexMatrix> {
        let (m, n) = (self.cols.len(), self.rows.len());
        if c.rows() != m || c.cols() != n {
            return Err(NufftError::InvalidArgument(format!(
                "expected a {m}x{n} matrix, got {}x{}",
                c.rows(),
                c.cols()
            )));
        }
        let mut work = c.as_slice().to_vec();
        let mut scratch = self.rows.make_scratch();
        self.rows.forward_with_scratch(&mut work, &mut scratch);

        let mut colmajor = vec![Complex64::new(0.0, 0.0); m * n];
        for r in 0..m {
            for k in 0..n {
                colmajor[k * m + r] = work[r * n + k];
            }
        }
        let mut scratch = self.cols.make_scratch();
        self.cols.forward_with_scratch(&mut colmajor, &mut scratch);
        for k in 0..n {
            for r in 0..m {
                work[r * n + k] = colmajor[k * m + r];
            }
        }
        ComplexMatrix::new(m, n, work)
    }
}

/// `F_m C F_nᵀ` for an `m × n` matrix `C`.
pub fn fft_2d_forward(c: &ComplexMatrix) -> Result<ComplexMatrix> {
    if c.rows() == 0 || c.cols() == 0 {
        return Err(NufftError::InvalidArgument("empty matrix".into()));
    }
    check_finite(c.as_slice(), "matrix")?;
    Fft2dPlan::new(c.rows(), c.cols())?.forward(c)
}
