use num_complex::Complex64;

use super::{Plan2, SampleSet};
use crate::error::{check_finite_reals, NufftError, Result};

/// Planned type-I transform `f_j = Σ_k c_k exp(-2πi j ω_k / N)`, `j < N`.
///
/// This is the transpose of the type-II transform with samples `ω_k / N`. Only
/// `ω mod N` matters, so any finite frequency is accepted. The reduction is
/// done in grid units, which keeps integer frequencies exactly on the grid.
#[derive(Debug, Clone)]
pub struct Plan1 {
    freqs: Vec<f64>,
    inner: Plan2,
}

impl Plan1 {
    pub fn new(omega: &[f64], epsilon: f64) -> Result<Self> {
        if omega.is_empty() {
            return Err(NufftError::InvalidArgument("need at least one frequency".into()));
        }
        check_finite_reals(omega, "frequencies")?;
        let n = omega.len();
        let scaled: Vec<f64> = omega
            .iter()
            .map(|w| {
                let z = w.rem_euclid(n as f64);
                if z >= n as f64 {
                    0.0
                } else {
                    z
                }
            })
            .collect();
        let inner = Plan2::from_samples(SampleSet::from_scaled(&scaled, n)?, epsilon)?;
        Ok(Self {
            freqs: omega.to_vec(),
            inner,
        })
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    /// The type-II plan on samples `ω / N mod 1`.
    pub fn inner(&self) -> &Plan2 {
        &self.inner
    }

    pub fn rank(&self) -> usize {
        self.inner.rank()
    }

    pub fn gamma(&self) -> f64 {
        self.inner.gamma()
    }

    /// `f = F̃₁ c = F̃₂ᵀ c`.
    pub fn execute(&self, c: &[Complex64]) -> Result<Vec<Complex64>> {
        self.inner.execute_transpose(c)
    }

    pub fn execute_par(&self, c: &[Complex64]) -> Result<Vec<Complex64>> {
        self.inner.execute_transpose_par(c)
    }

    /// `F̃₁* y = conj(F̃₂ conj(y))`.
    pub fn execute_adjoint(&self, y: &[Complex64]) -> Result<Vec<Complex64>> {
        let conj: Vec<Complex64> = y.iter().map(|z| z.conj()).collect();
        let mut out = self.inner.execute(&conj)?;
        out.iter_mut().for_each(|z| *z = z.conj());
        Ok(out)
    }
}
