use num_complex::Complex64;
use rayon::prelude::*;

use super::{normalize_samples, Plan1, SampleSet, ZERO};
use crate::approx::{build_factors, LowRankFactors};
use crate::error::{check_epsilon, check_finite, check_finite_reals, check_len, NufftError, Result};

/// Planned type-III transform `f_j = Σ_k c_k exp(-2πi x_j ω_k)` with samples
/// `x_j` (reduced into `[0, 1)`) and frequencies `ω_k ∈ [0, N)`.
///
/// Writing `N x_j = s_j + δ_j` and `t_j = s_j mod N`,
///
/// ```text
/// exp(-2πi x_j ω_k) = A_jk · B_jk · exp(-2πi t_j ω_k / N)
/// A_jk = exp(-2πi δ_j ω_k / N)
/// B_jk = 1 if s_j = t_j, exp(-2πi ω_k) otherwise
/// ```
///
/// The last factor is row `t_j` of the type-I matrix, `A` has rank `K` and `B`
/// rank at most 2, so the transform is a sum of at most `2K` type-I transforms.
#[derive(Debug, Clone)]
pub struct Plan3 {
    samples: SampleSet,
    freqs: Vec<f64>,
    core: Plan1,
    factors_a: LowRankFactors,
    combined: LowRankFactors,
    b_trivial: bool,
}

impl Plan3 {
    pub fn new(x_raw: &[f64], omega: &[f64], epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        if x_raw.is_empty() {
            return Err(NufftError::InvalidArgument("need at least one sample".into()));
        }
        check_len(x_raw.len(), omega.len())?;
        check_finite_reals(omega, "frequencies")?;
        let n = x_raw.len();
        if let Some(k) = omega.iter().position(|w| *w < 0.0 || *w >= n as f64) {
            return Err(NufftError::InvalidArgument(format!(
                "frequency {k} = {} lies outside [0, {n})",
                omega[k]
            )));
        }
        let x = normalize_samples(x_raw)?;
        let samples = SampleSet::new(&x, n)?;
        let core = Plan1::new(omega, epsilon)?;

        let scaled: Vec<f64> = omega.iter().map(|w| w / n as f64).collect();
        let factors_a = build_factors(samples.delta(), samples.gamma(), &scaled, epsilon)?;
        let b_trivial = samples.wraps_none();
        let combined = if b_trivial {
            factors_a.clone()
        } else {
            factors_a.hadamard(&b_factors(&samples, omega)?)?
        };
        Ok(Self {
            samples,
            freqs: omega.to_vec(),
            core,
            factors_a,
            combined,
            b_trivial,
        })
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn samples(&self) -> &SampleSet {
        &self.samples
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn core(&self) -> &Plan1 {
        &self.core
    }

    /// Combined factors of `A ∘ B`, one column pair per type-I transform.
    pub fn factors(&self) -> &LowRankFactors {
        &self.combined
    }

    /// Rank `K` of the `A` factors.
    pub fn rank(&self) -> usize {
        self.factors_a.rank()
    }

    /// True when no sample wrapped to node 0, so `B` is all ones.
    pub fn is_b_trivial(&self) -> bool {
        self.b_trivial
    }

    /// Number of type-I transforms per execution: `K`, or `2K` when `B` is
    /// not trivial.
    pub fn effective_rank(&self) -> usize {
        self.combined.rank()
    }

    /// Total FFTs per execution.
    pub fn fft_count(&self) -> usize {
        self.effective_rank() * self.core.rank()
    }

    fn check_input(&self, c: &[Complex64]) -> Result<()> {
        check_len(self.len(), c.len())?;
        check_finite(c, "input")
    }

    fn term(&self, a: usize, c: &[Complex64]) -> Result<Vec<Complex64>> {
        let scaled: Vec<Complex64> = self.combined.v(a).iter().zip(c).map(|(v, x)| v * x).collect();
        self.core.execute(&scaled)
    }

    fn merge(&self, a: usize, g: &[Complex64], out: &mut [Complex64]) {
        for ((o, u), &t) in out.iter_mut().zip(self.combined.u(a)).zip(self.samples.t()) {
            *o += u * g[t];
        }
    }

    pub fn execute(&self, c: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_input(c)?;
        let mut out = vec![ZERO; self.len()];
        for a in 0..self.effective_rank() {
            let g = self.term(a, c)?;
            self.merge(a, &g, &mut out);
        }
        Ok(out)
    }

    /// Parallel over the outer terms; bit-identical to [`execute`](Self::execute).
    pub fn execute_par(&self, c: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_input(c)?;
        let terms = (0..self.effective_rank())
            .into_par_iter()
            .map(|a| self.term(a, c))
            .collect::<Result<Vec<_>>>()?;
        let mut out = vec![ZERO; self.len()];
        for (a, g) in terms.iter().enumerate() {
            self.merge(a, g, &mut out);
        }
        Ok(out)
    }
}

/// Rank-2 factors of `B_jk = (1 - b_j) + b_j exp(-2πi ω_k)`, `b_j = (s_j - t_j) / N`.
fn b_factors(samples: &SampleSet, omega: &[f64]) -> Result<LowRankFactors> {
    let n = samples.grid();
    let one = Complex64::new(1.0, 0.0);
    let wrapped: Vec<f64> = samples
        .s()
        .iter()
        .zip(samples.t())
        .map(|(s, t)| ((s - t) / n) as f64)
        .collect();
    let u0 = wrapped.iter().map(|b| Complex64::new(1.0 - b, 0.0)).collect();
    let u1 = wrapped.iter().map(|b| Complex64::new(*b, 0.0)).collect();
    let v0 = vec![one; omega.len()];
    // exp(-2πi ω) only depends on the fractional part, taken exactly.
    let v1 = omega
        .iter()
        .map(|w| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * (w - w.floor())))
        .collect();
    LowRankFactors::from_columns(vec![u0, u1], vec![v0, v1])
}
