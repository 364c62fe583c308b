//! Inverse type-I and type-II transforms by conjugate gradients.
//!
//! Both normal matrices are Hermitian Toeplitz:
//!
//! ```text
//! (F̃₂* F̃₂)_jk = Σ_p exp(2πi x_p (j - k))
//! (F̃₁ F̃₁*)_jk = Σ_p exp(-2πi (j - k) ω_p / N)
//! ```
//!
//! so each is determined by its first column, which one forward and one
//! adjoint transform produce from `e_0`. A Toeplitz matrix-vector product is
//! then a length-`2N` circulant product, one FFT and one inverse FFT.

use num_complex::Complex64;

use crate::error::{check_finite, check_len, NufftError, Result};
use crate::fft::FftPlan;
use crate::transforms::{Plan1, Plan2};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Default relative residual tolerance.
pub const DEFAULT_TOL: f64 = 1e-14;

/// Default iteration cap, `max(100, 4√N)`.
pub fn default_max_iter(n: usize) -> usize {
    100usize.max((4.0 * (n as f64).sqrt()).ceil() as usize)
}

/// A Hermitian Toeplitz matrix applied through its circulant embedding.
#[derive(Debug, Clone)]
pub struct ToeplitzOperator {
    n: usize,
    first_column: Vec<Complex64>,
    spectrum: Vec<f64>,
    max_imag: f64,
    fft: FftPlan,
}

impl ToeplitzOperator {
    /// Build from the first column. The diagonal entry is taken to be real (its
    /// imaginary part is dropped) and the first row is the conjugate of the
    /// column.
    pub fn from_first_column(column: &[Complex64]) -> Result<Self> {
        if column.is_empty() {
            return Err(NufftError::InvalidArgument("empty Toeplitz column".into()));
        }
        check_finite(column, "Toeplitz column")?;
        let n = column.len();
        let mut first_column = column.to_vec();
        first_column[0] = Complex64::new(first_column[0].re, 0.0);

        let mut embedding = vec![ZERO; 2 * n];
        embedding[..n].copy_from_slice(&first_column);
        for k in 1..n {
            embedding[2 * n - k] = first_column[k].conj();
        }
        let fft = FftPlan::new(2 * n)?;
        fft.forward_in_place(&mut embedding);
        let max_imag = embedding.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        Ok(Self {
            n,
            first_column,
            spectrum: embedding.iter().map(|z| z.re).collect(),
            max_imag,
            fft,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first_column(&self) -> &[Complex64] {
        &self.first_column
    }

    /// Eigenvalues of the length-`2N` circulant embedding, real parts only.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    /// Largest imaginary part discarded from the spectrum.
    pub fn max_imag_part(&self) -> f64 {
        self.max_imag
    }

    /// Entry `(j, k)`.
    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        if j >= k {
            self.first_column[j - k]
        } else {
            self.first_column[k - j].conj()
        }
    }

    pub fn matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.n, v.len())?;
        Ok(self.apply(v))
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut buf = vec![ZERO; 2 * self.n];
        buf[..self.n].copy_from_slice(v);
        let mut scratch = self.fft.make_scratch();
        self.fft.forward_with_scratch(&mut buf, &mut scratch);
        for (b, s) in buf.iter_mut().zip(&self.spectrum) {
            *b *= *s;
        }
        self.fft.conj_forward_with_scratch(&mut buf, &mut scratch);
        let scale = 1.0 / (2 * self.n) as f64;
        buf.truncate(self.n);
        buf.iter_mut().for_each(|z| *z *= scale);
        buf
    }
}

/// `F̃₂* F̃₂` for a type-II plan.
pub fn toeplitz_from_normal(plan: &Plan2) -> Result<ToeplitzOperator> {
    let mut e0 = vec![ZERO; plan.len()];
    e0[0] = Complex64::new(1.0, 0.0);
    let column = plan.execute_adjoint(&plan.execute(&e0)?)?;
    ToeplitzOperator::from_first_column(&column)
}

/// `F̃₁ F̃₁*` for a type-I plan.
pub fn toeplitz_from_gram(plan: &Plan1) -> Result<ToeplitzOperator> {
    let mut e0 = vec![ZERO; plan.len()];
    e0[0] = Complex64::new(1.0, 0.0);
    let column = plan.execute(&plan.execute_adjoint(&e0)?)?;
    ToeplitzOperator::from_first_column(&column)
}

/// Outcome of a conjugate gradient solve.
#[derive(Debug, Clone)]
pub struct CgReport {
    pub solution: Vec<Complex64>,
    pub iterations: usize,
    /// `‖b - A x‖ / ‖b‖` for the returned solution.
    pub relative_residual: f64,
    /// Recursive relative residual after each iteration.
    pub residual_history: Vec<f64>,
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn residual(apply: &impl Fn(&[Complex64]) -> Vec<Complex64>, x: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    apply(x).iter().zip(b).map(|(ax, bi)| bi - ax).collect()
}

/// Conjugate gradients for a Hermitian positive (semi)definite operator,
/// starting from zero.
///
/// Returns once `‖b - A x‖ / ‖b‖ ≤ tol` (checked on the true residual), or
/// [`NufftError::NotConverged`] with the best iterate after `max_iter` steps.
pub fn cg_solve(
    apply: impl Fn(&[Complex64]) -> Vec<Complex64>,
    rhs: &[Complex64],
    tol: f64,
    max_iter: usize,
) -> Result<CgReport> {
    cg_solve_monitored(apply, rhs, tol, max_iter, |_, _| {})
}

/// [`cg_solve`] calling `monitor(iteration, x)` after every update.
pub fn cg_solve_monitored(
    apply: impl Fn(&[Complex64]) -> Vec<Complex64>,
    rhs: &[Complex64],
    tol: f64,
    max_iter: usize,
    mut monitor: impl FnMut(usize, &[Complex64]),
) -> Result<CgReport> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(NufftError::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    check_finite(rhs, "right-hand side")?;
    let n = rhs.len();
    let b_norm = norm(rhs);
    if b_norm == 0.0 {
        return Ok(CgReport {
            solution: vec![ZERO; n],
            iterations: 0,
            relative_residual: 0.0,
            residual_history: Vec::new(),
        });
    }

    let mut x = vec![ZERO; n];
    let mut r = rhs.to_vec();
    let mut p = r.clone();
    let mut rs = dot(&r, &r).re;
    let mut history = Vec::new();
    let mut best = (1.0, x.clone());

    for it in 1..=max_iter {
        let ap = apply(&p);
        let curvature = dot(&p, &ap).re;
        if curvature.is_nan() || curvature <= 0.0 {
            break;
        }
        let alpha = rs / curvature;
        for ((xi, ri), (pi, api)) in x.iter_mut().zip(r.iter_mut()).zip(p.iter().zip(&ap)) {
            *xi += pi * alpha;
            *ri -= api * alpha;
        }
        monitor(it, &x);
        let mut rs_new = dot(&r, &r).re;
        let rel = rs_new.sqrt() / b_norm;
        history.push(rel);
        if rel < best.0 {
            best = (rel, x.clone());
        }
        if rel <= tol {
            let true_r = residual(&apply, &x, rhs);
            let true_rel = norm(&true_r) / b_norm;
            if true_rel <= tol {
                return Ok(CgReport {
                    solution: x,
                    iterations: it,
                    relative_residual: true_rel,
                    residual_history: history,
                });
            }
            // The recursion drifted; restart from the true residual.
            r = true_r;
            rs_new = dot(&r, &r).re;
            p = r.clone();
            rs = rs_new;
            continue;
        }
        let beta = rs_new / rs;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + *pi * beta;
        }
        rs = rs_new;
    }

    let (_, solution) = best;
    let relative_residual = norm(&residual(&apply, &solution, rhs)) / b_norm;
    Err(NufftError::NotConverged(Box::new(CgReport {
        solution,
        iterations: history.len(),
        relative_residual,
        residual_history: history,
    })))
}

fn check_invertible(gamma: f64) -> Result<()> {
    if gamma >= 0.5 {
        Err(NufftError::Precondition(format!(
            "gamma = {gamma} >= 1/2: samples may not be distinct, the inverse is not guaranteed to exist"
        )))
    } else {
        Ok(())
    }
}

/// Inverse type-II transform with a cached normal operator.
#[derive(Debug, Clone)]
pub struct InverseNufft2 {
    plan: Plan2,
    operator: ToeplitzOperator,
}

impl InverseNufft2 {
    pub fn new(plan: Plan2) -> Result<Self> {
        check_invertible(plan.gamma())?;
        let operator = toeplitz_from_normal(&plan)?;
        Ok(Self { plan, operator })
    }

    pub fn plan(&self) -> &Plan2 {
        &self.plan
    }

    pub fn operator(&self) -> &ToeplitzOperator {
        &self.operator
    }

    /// Solve `F̃₂ c = f` through `F̃₂* F̃₂ c = F̃₂* f`.
    pub fn solve(&self, f: &[Complex64], tol: f64, max_iter: usize) -> Result<CgReport> {
        let rhs = self.plan.execute_adjoint(f)?;
        cg_solve(|v| self.operator.apply(v), &rhs, tol, max_iter)
    }
}

/// Inverse type-I transform with a cached Gram operator.
#[derive(Debug, Clone)]
pub struct InverseNufft1 {
    plan: Plan1,
    operator: ToeplitzOperator,
}

impl InverseNufft1 {
    pub fn new(plan: Plan1) -> Result<Self> {
        check_invertible(plan.gamma())?;
        let operator = toeplitz_from_gram(&plan)?;
        Ok(Self { plan, operator })
    }

    pub fn plan(&self) -> &Plan1 {
        &self.plan
    }

    pub fn operator(&self) -> &ToeplitzOperator {
        &self.operator
    }

    /// Solve `F̃₁ c = f` as `c = F̃₁* y` with `F̃₁ F̃₁* y = f`.
    pub fn solve(&self, f: &[Complex64], tol: f64, max_iter: usize) -> Result<CgReport> {
        check_len(self.plan.len(), f.len())?;
        match cg_solve(|v| self.operator.apply(v), f, tol, max_iter) {
            Ok(mut report) => {
                report.solution = self.plan.execute_adjoint(&report.solution)?;
                Ok(report)
            }
            Err(NufftError::NotConverged(mut report)) => {
                report.solution = self.plan.execute_adjoint(&report.solution)?;
                Err(NufftError::NotConverged(report))
            }
            Err(e) => Err(e),
        }
    }
}

/// Solve `F̃₂ c = f` for `c`.
pub fn inufft2(plan: &Plan2, f: &[Complex64], tol: f64) -> Result<CgReport> {
    InverseNufft2::new(plan.clone())?.solve(f, tol, default_max_iter(plan.len()))
}

/// Solve `F̃₁ c = f` for `c`.
pub fn inufft1(plan: &Plan1, f: &[Complex64], tol: f64) -> Result<CgReport> {
    InverseNufft1::new(plan.clone())?.solve(f, tol, default_max_iter(plan.len()))
}
