use num_complex::Complex64;

use super::{Engine, Mode, SampleSet};
use crate::approx::{build_factors, LowRankFactors};
use crate::error::{check_epsilon, check_finite, check_len, NufftError, Result};
use crate::fft::FftPlan;
use crate::transforms::normalize_samples;

/// Planned type-II transform `f_j = Σ_{k<N} c_k exp(-2πi x_j k)` for `N`
/// samples `x_j`.
#[derive(Debug, Clone)]
pub struct Plan2 {
    samples: SampleSet,
    epsilon: f64,
    engine: Engine,
}

impl Plan2 {
    /// Plan for raw samples, which are first reduced into `[0, 1)`.
    pub fn new(x_raw: &[f64], epsilon: f64) -> Result<Self> {
        if x_raw.is_empty() {
            return Err(NufftError::InvalidArgument("need at least one sample".into()));
        }
        let x = normalize_samples(x_raw)?;
        Self::from_samples(SampleSet::new(&x, x.len())?, epsilon)
    }

    /// Plan for an already assigned sample set. The grid size must equal the
    /// number of samples.
    pub fn from_samples(samples: SampleSet, epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        let n = samples.grid();
        check_len(n, samples.len())?;
        let freqs: Vec<f64> = (0..n).map(|k| k as f64 / n as f64).collect();
        let factors = build_factors(samples.delta(), samples.gamma(), &freqs, epsilon)?;
        Ok(Self {
            engine: Engine::new(samples.t(), &factors, FftPlan::new(n)?),
            samples,
            epsilon,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.grid()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of FFTs per execution.
    pub fn rank(&self) -> usize {
        self.engine.rank()
    }

    pub fn gamma(&self) -> f64 {
        self.samples.gamma()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn samples(&self) -> &SampleSet {
        &self.samples
    }

    /// The low-rank factors, in sample order.
    pub fn factors(&self) -> LowRankFactors {
        self.engine.factors()
    }

    fn check_input(&self, c: &[Complex64]) -> Result<()> {
        check_len(self.len(), c.len())?;
        check_finite(c, "input")
    }

    /// `f = F̃₂ c`.
    pub fn execute(&self, c: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_input(c)?;
        Ok(self.engine.run(Mode::Forward, c))
    }

    /// Same as [`execute`](Self::execute) with the `K` FFTs spread over the
    /// rayon pool. Bit-identical to the sequential result.
    pub fn execute_par(&self, c: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_input(c)?;
        Ok(self.engine.run_par(Mode::Forward, c))
    }

    /// `F̃₂ᵀ c`, the type-I transform with frequencies `N x_j`.
    pub fn execute_transpose(&self, c: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_input(c)?;
        Ok(self.engine.run(Mode::Transpose, c))
    }

    pub fn execute_transpose_par(&self, c: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_input(c)?;
        Ok(self.engine.run_par(Mode::Transpose, c))
    }

    /// `F̃₂* f`, the conjugate transpose.
    pub fn execute_adjoint(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        self.check_input(f)?;
        Ok(self.engine.run(Mode::Adjoint, f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fft::{fft_forward, fft_inverse};
    use crate::oracle::{dense_nudft_matrix, nudft_direct, worst_grid};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn gaussian(n: usize, rng: &mut ChaCha8Rng) -> Vec<Complex64> {
        (0..n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect()
    }

    fn norm(v: &[Complex64]) -> f64 {
        v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    fn diff_norm(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
    }

    fn perturbed(n: usize, gamma: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..n)
            .map(|j| {
                let off: f64 = rng.random_range(-1.0..=1.0);
                (j as f64 + gamma * off) / n as f64
            })
            .collect()
    }

    #[test]
    fn equispaced_plan_has_rank_one_and_matches_fft() {
        let n = 64;
        let x: Vec<f64> = (0..n).map(|j| j as f64 / n as f64).collect();
        let plan = Plan2::new(&x, 2.2e-16).unwrap();
        assert_eq!(plan.rank(), 1);
        assert_eq!(plan.gamma(), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = gaussian(n, &mut rng);
        let f = plan.execute(&c).unwrap();
        let want = fft_forward(&c).unwrap();
        assert!(diff_norm(&f, &want) <= 1e-14 * norm(&want));
    }

    #[test]
    fn worst_grid_rank() {
        let plan = Plan2::new(&worst_grid(64, 0.5).unwrap(), 2.2e-16).unwrap();
        assert_eq!(plan.gamma(), 0.5);
        assert_eq!(crate::approx::select_rank(0.5, 2.2e-16).unwrap(), 16);
        assert_eq!(plan.rank(), 17);
    }

    #[test]
    fn single_sample() {
        let plan = Plan2::new(&[0.3], 1e-15).unwrap();
        let c = [Complex64::new(2.0, -1.0)];
        let f = plan.execute(&c).unwrap();
        assert!((f[0] - c[0]).norm() < 1e-15);
    }

    #[test]
    fn unit_impulse_gives_ones() {
        let n = 32;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let plan = Plan2::new(&perturbed(n, 0.4, &mut rng), 2.2e-16).unwrap();
        let mut c = vec![Complex64::new(0.0, 0.0); n];
        c[0] = Complex64::new(1.0, 0.0);
        let f = plan.execute(&c).unwrap();
        for z in f {
            assert!((z - 1.0).norm() <= n as f64 * 2.2e-16);
        }
    }

    #[test]
    fn worst_grid_error_bound() {
        let n = 64;
        let eps = 2.2e-16;
        let x = worst_grid(n, 0.5).unwrap();
        let plan = Plan2::new(&x, eps).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = gaussian(n, &mut rng);
        let omega: Vec<f64> = (0..n).map(|k| k as f64).collect();
        let want = nudft_direct(&x, &omega, &c).unwrap();
        let got = plan.execute(&c).unwrap();
        assert!(diff_norm(&got, &want) <= n as f64 * eps * norm(&c));
    }

    #[test]
    fn looser_precision_tracks_epsilon() {
        let n = 128;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = perturbed(n, 0.5, &mut rng);
        let c = gaussian(n, &mut rng);
        let omega: Vec<f64> = (0..n).map(|k| k as f64).collect();
        let want = nudft_direct(&x, &omega, &c).unwrap();
        for eps in [1e-4, 1e-8, 1.2e-7] {
            let got = Plan2::new(&x, eps).unwrap().execute(&c).unwrap();
            assert!(diff_norm(&got, &want) <= n as f64 * eps * norm(&c), "eps {eps}");
        }
    }

    #[test]
    fn transpose_and_adjoint_match_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [1, 2, 5, 16, 31] {
            let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let plan = Plan2::new(&x, 2.2e-16).unwrap();
            let omega: Vec<f64> = (0..n).map(|k| k as f64).collect();
            let dense = dense_nudft_matrix(&x, &omega).unwrap();
            let c = gaussian(n, &mut rng);
            let transpose: Vec<Complex64> = (0..n)
                .map(|k| (0..n).map(|j| dense.get(j, k) * c[j]).sum())
                .collect();
            let adjoint: Vec<Complex64> = (0..n)
                .map(|k| (0..n).map(|j| dense.get(j, k).conj() * c[j]).sum())
                .collect();
            let scale = norm(&c);
            let got_t = plan.execute_transpose(&c).unwrap();
            let got_a = plan.execute_adjoint(&c).unwrap();
            for k in 0..n {
                assert!((got_t[k] - transpose[k]).norm() <= 1e-12 * scale);
                assert!((got_a[k] - adjoint[k]).norm() <= 1e-12 * scale);
            }
        }
    }

    #[test]
    fn adjoint_of_equispaced_is_scaled_inverse() {
        let n = 24;
        let x: Vec<f64> = (0..n).map(|j| j as f64 / n as f64).collect();
        let plan = Plan2::new(&x, 1e-15).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let f = gaussian(n, &mut rng);
        let got = plan.execute_adjoint(&f).unwrap();
        let want: Vec<Complex64> = fft_inverse(&f).unwrap().iter().map(|z| z * n as f64).collect();
        assert!(diff_norm(&got, &want) <= 1e-13 * norm(&want));
        let zero = vec![Complex64::new(0.0, 0.0); n];
        assert!(plan.execute_adjoint(&zero).unwrap().iter().all(|z| *z == zero[0]));
    }

    #[test]
    fn parallel_is_bit_identical() {
        let n = 256;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let plan = Plan2::new(&perturbed(n, 0.45, &mut rng), 2.2e-16).unwrap();
        let c = gaussian(n, &mut rng);
        let a = plan.execute(&c).unwrap();
        let b = plan.execute(&c).unwrap();
        let p = plan.execute_par(&c).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, p);
        assert_eq!(
            plan.execute_transpose(&c).unwrap(),
            plan.execute_transpose_par(&c).unwrap()
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Plan2::new(&[], 1e-10).is_err());
        assert!(Plan2::new(&[0.1, f64::NAN], 1e-10).is_err());
        assert!(Plan2::new(&[0.1, 0.6], 0.0).unwrap_err().is_domain());
        let plan = Plan2::new(&[0.1, 0.6], 1e-10).unwrap();
        assert!(matches!(
            plan.execute(&[Complex64::new(1.0, 0.0)]),
            Err(NufftError::LengthMismatch { expected: 2, found: 1 })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn linear_in_coefficients(seed in any::<u64>(), n in 1usize..40, a in -2.0f64..2.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let plan = Plan2::new(&x, 1e-14).unwrap();
            let c1 = gaussian(n, &mut rng);
            let c2 = gaussian(n, &mut rng);
            let combo: Vec<Complex64> = c1.iter().zip(&c2).map(|(p, q)| p * a + q).collect();
            let lhs = plan.execute(&combo).unwrap();
            let f1 = plan.execute(&c1).unwrap();
            let f2 = plan.execute(&c2).unwrap();
            let rhs: Vec<Complex64> = f1.iter().zip(&f2).map(|(p, q)| p * a + q).collect();
            prop_assert!(diff_norm(&lhs, &rhs) <= 1e-12 * (norm(&c1) + norm(&c2)) * n as f64);
        }

        #[test]
        fn periodic_in_samples(seed in any::<u64>(), n in 1usize..24, shift in -3i32..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let shifted: Vec<f64> = x.iter().map(|v| v + shift as f64).collect();
            let c = gaussian(n, &mut rng);
            let a = Plan2::new(&x, 1e-14).unwrap().execute(&c).unwrap();
            let b = Plan2::new(&shifted, 1e-14).unwrap().execute(&c).unwrap();
            prop_assert!(diff_norm(&a, &b) <= 1e-12 * norm(&c) * n as f64);
        }

        #[test]
        fn adjoint_identity(seed in any::<u64>(), n in 1usize..40) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let plan = Plan2::new(&x, 1e-14).unwrap();
            let c = gaussian(n, &mut rng);
            let f = gaussian(n, &mut rng);
            let lhs: Complex64 = plan.execute(&c).unwrap().iter().zip(&f).map(|(a, b)| b.conj() * a).sum();
            let rhs: Complex64 = plan.execute_adjoint(&f).unwrap().iter().zip(&c).map(|(a, b)| a.conj() * b).sum();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * norm(&c) * norm(&f) * n as f64);
        }
    }
}
