//! Low-rank approximation of the correction matrix `A_jk = exp(-2πi δ_j ω_k / N)`.
//!
//! With `|δ_j| ≤ γ` and `ω_k / N ∈ [0, 1]`, a truncated bivariate Chebyshev
//! expansion of `exp(-ixy)` on `[-γ, γ] × [0, 2π]` gives
//!
//! ```text
//! A ≈ Σ'_r Σ'_p a_pr (exp(-iπδ) ∘ T_p(δ/γ)) T_r(2ω/N - 1)ᵀ
//! ```
//!
//! where primes halve the first term of each sum and the coefficients are
//! `a_pr = 4 i^r J_{(p+r)/2}(-γπ/2) J_{(r-p)/2}(-γπ/2)` for even `p - r`, zero
//! otherwise. Grouping by `r` yields `K` column pairs `(u_r, v_r)`.

pub mod special;

use num_complex::Complex64;

pub use special::{bessel_j_int, bessel_j_signed, lambert_w};

use crate::error::{check_epsilon, check_finite_reals, NufftError, Result};

/// Largest rank the planner will build.
pub const MAX_RANK: usize = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Working precisions with tabulated ranks, and the ranks for the γ brackets
/// `(0, 1/32], (1/32, 1/16], (1/16, 1/8], (1/8, 1/4], (1/4, 1/2]`.
const RANK_TABLE: [(f64, [usize; 5]); 3] = [
    (2.2e-16, [8, 9, 11, 13, 16]),
    (1.2e-7, [5, 6, 7, 8, 10]),
    (9.8e-4, [3, 3, 4, 5, 7]),
];

const GAMMA_BRACKETS: [f64; 5] = [1.0 / 32.0, 1.0 / 16.0, 1.0 / 8.0, 1.0 / 4.0, 1.0 / 2.0];

/// Coefficients `a_pr`, `0 ≤ p, r < K`, of the bivariate Chebyshev expansion.
#[derive(Debug, Clone)]
pub struct ChebCoefficients {
    rank: usize,
    gamma: f64,
    // row-major in (p, r)
    a: Vec<Complex64>,
}

impl ChebCoefficients {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn get(&self, p: usize, r: usize) -> Complex64 {
        self.a[p * self.rank + r]
    }
}

fn i_pow(r: usize, value: f64) -> Complex64 {
    match r % 4 {
        0 => Complex64::new(value, 0.0),
        1 => Complex64::new(0.0, value),
        2 => Complex64::new(-value, 0.0),
        _ => Complex64::new(0.0, -value),
    }
}

pub fn cheb_coefficients(gamma: f64, rank: usize) -> Result<ChebCoefficients> {
    if !(gamma > 0.0 && gamma <= 0.5) {
        return Err(NufftError::InvalidArgument(format!(
            "Chebyshev coefficients need 0 < gamma <= 1/2, got {gamma}"
        )));
    }
    if rank == 0 {
        return Err(NufftError::InvalidArgument("rank must be positive".into()));
    }
    let z = -gamma * std::f64::consts::PI / 2.0;
    let bessel: Vec<f64> = (0..rank).map(|n| bessel_j_int(n as u32, z)).collect();
    let signed = |order: i64| {
        let value = bessel[order.unsigned_abs() as usize];
        if order < 0 && order % 2 != 0 {
            -value
        } else {
            value
        }
    };
    let mut a = vec![ZERO; rank * rank];
    for p in 0..rank {
        for r in 0..rank {
            if (p + r) % 2 == 0 {
                let sum = ((p + r) / 2) as i64;
                let diff = (r as i64 - p as i64) / 2;
                a[p * rank + r] = i_pow(r, 4.0 * signed(sum) * signed(diff));
            }
        }
    }
    Ok(ChebCoefficients { rank, gamma, a })
}

fn bracket(gamma: f64) -> usize {
    GAMMA_BRACKETS
        .iter()
        .position(|&edge| gamma <= edge)
        .unwrap_or(GAMMA_BRACKETS.len() - 1)
}

/// Closed-form rank: the smallest `K ≥ 3` with `140 (5γ/(K-1))^(K-1) ≤ ε`,
/// evaluated through the Lambert-W function.
pub fn formula_rank(gamma: f64, epsilon: f64) -> Result<usize> {
    check_epsilon(epsilon)?;
    if gamma <= 0.0 {
        return Ok(1);
    }
    let scale = 5.0 * gamma;
    let w = lambert_w((140.0 / epsilon).ln() / scale)?;
    let k_minus_one = (scale * w.exp()).ceil();
    Ok((k_minus_one as usize + 1).max(3))
}

fn check_gamma(gamma: f64) -> Result<()> {
    if (0.0..=0.5).contains(&gamma) {
        Ok(())
    } else {
        Err(NufftError::Domain(format!(
            "perturbation parameter must lie in [0, 1/2], got {gamma}"
        )))
    }
}

/// Rank `K` for perturbation `gamma` and working precision `epsilon`.
///
/// `gamma == 0` gives 1. Otherwise the closed-form [`formula_rank`] is clamped
/// between tabulated ranks of the standard precisions (`2.2e-16`, `1.2e-7`,
/// `9.8e-4`), each of which covers a factor-of-two window around itself: a
/// precision whose window starts at or below `epsilon` caps the rank, one whose
/// window ends at or above `epsilon` floors it. Inside a window both bounds are
/// the tabulated entry; between windows the bounds keep the result monotone in
/// both arguments. Ranks above [`MAX_RANK`] are an error.
pub fn select_rank(gamma: f64, epsilon: f64) -> Result<usize> {
    check_epsilon(epsilon)?;
    check_gamma(gamma)?;
    if gamma == 0.0 {
        return Ok(1);
    }
    let column = bracket(gamma);
    let floor = RANK_TABLE
        .iter()
        .filter(|(standard, _)| epsilon <= 2.0 * standard)
        .map(|(_, row)| row[column])
        .max()
        .unwrap_or(1);
    let cap = RANK_TABLE
        .iter()
        .filter(|(standard, _)| epsilon >= 0.5 * standard)
        .map(|(_, row)| row[column])
        .min()
        .unwrap_or(usize::MAX);
    let k = formula_rank(gamma, epsilon)?.max(floor).min(cap);
    if k > MAX_RANK {
        return Err(NufftError::Domain(format!(
            "precision {epsilon:e} needs rank {k} (> {MAX_RANK}); it is below what the expansion can deliver"
        )));
    }
    Ok(k)
}

/// Sum of `|a_pr|` (with the first-term halving) over every pair with
/// `max(p, r) ≥ K`, for each `K` in `0..=MAX_RANK`. This bounds the
/// entrywise truncation error of a rank-`K` expansion.
fn coefficient_tails(gamma: f64) -> Vec<f64> {
    const TERMS: usize = MAX_RANK + 32;
    let z = gamma * std::f64::consts::PI / 2.0;
    let bessel: Vec<f64> = (0..TERMS).map(|n| bessel_j_int(n as u32, z).abs()).collect();
    let weight = |i: usize| if i == 0 { 0.5 } else { 1.0 };
    let mut by_level = vec![0.0; TERMS];
    for p in 0..TERMS {
        for r in (p % 2..TERMS).step_by(2) {
            let magnitude = 4.0 * bessel[(p + r) / 2] * bessel[p.abs_diff(r) / 2];
            by_level[p.max(r)] += weight(p) * weight(r) * magnitude;
        }
    }
    let mut tails = vec![0.0; MAX_RANK + 1];
    let mut acc: f64 = by_level[MAX_RANK + 1..].iter().rev().sum();
    for k in (0..=MAX_RANK).rev() {
        acc += by_level[k];
        tails[k] = acc;
    }
    tails
}

/// Smallest `K` whose coefficient tail is at most `epsilon`.
pub fn certified_rank(gamma: f64, epsilon: f64) -> Result<usize> {
    check_epsilon(epsilon)?;
    check_gamma(gamma)?;
    if gamma == 0.0 {
        return Ok(1);
    }
    let tails = coefficient_tails(gamma);
    (1..=MAX_RANK)
        .find(|&k| tails[k] <= epsilon)
        .ok_or_else(|| {
            NufftError::Domain(format!(
                "precision {epsilon:e} is not attainable with rank <= {MAX_RANK}"
            ))
        })
}

/// Rank actually used to build factors: the selected rank, raised when needed
/// so the truncation tail stays within `epsilon`.
///
/// In double precision the tabulated ranks leave a tail of 8–42 ε at the top
/// of each γ bracket; this adds the one extra term that closes the gap.
pub fn required_rank(gamma: f64, epsilon: f64) -> Result<usize> {
    Ok(select_rank(gamma, epsilon)?.max(certified_rank(gamma, epsilon)?))
}

/// Columns `T_p(points)` for `p < k`, via the three-term recurrence.
///
/// `result[p][j] = T_p(points[j])`. Points within `1e-12` outside `[-1, 1]` are
/// clamped.
pub fn cheb_eval_matrix(points: &[f64], k: usize) -> Result<Vec<Vec<f64>>> {
    check_finite_reals(points, "points")?;
    let mut clamped = Vec::with_capacity(points.len());
    for (j, &x) in points.iter().enumerate() {
        if x.abs() > 1.0 + 1e-12 {
            return Err(NufftError::Domain(format!(
                "Chebyshev point {j} = {x} lies outside [-1, 1]"
            )));
        }
        clamped.push(x.clamp(-1.0, 1.0));
    }
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(k);
    for p in 0..k {
        let column = match p {
            0 => vec![1.0; clamped.len()],
            1 => clamped.clone(),
            _ => {
                let (prev, prev2) = (&columns[p - 1], &columns[p - 2]);
                clamped
                    .iter()
                    .zip(prev.iter().zip(prev2))
                    .map(|(x, (t1, t0))| 2.0 * x * t1 - t0)
                    .collect()
            }
        };
        columns.push(column);
    }
    Ok(columns)
}

/// `K` column pairs with `A ≈ Σ_r u_r v_rᵀ`. `u_r` is indexed by sample,
/// `v_r` by frequency.
#[derive(Debug, Clone)]
pub struct LowRankFactors {
    u: Vec<Vec<Complex64>>,
    v: Vec<Vec<Complex64>>,
}

impl LowRankFactors {
    pub fn from_columns(u: Vec<Vec<Complex64>>, v: Vec<Vec<Complex64>>) -> Result<Self> {
        if u.is_empty() || u.len() != v.len() {
            return Err(NufftError::InvalidArgument(format!(
                "need the same positive number of u and v columns, got {} and {}",
                u.len(),
                v.len()
            )));
        }
        let (rows, cols) = (u[0].len(), v[0].len());
        if u.iter().any(|c| c.len() != rows) || v.iter().any(|c| c.len() != cols) {
            return Err(NufftError::InvalidArgument("ragged factor columns".into()));
        }
        Ok(Self { u, v })
    }

    /// Rank-1 all-ones factors, exact for `A = 1 1ᵀ`.
    pub fn ones(samples: usize, freqs: usize) -> Self {
        Self {
            u: vec![vec![ONE; samples]],
            v: vec![vec![ONE; freqs]],
        }
    }

    pub fn rank(&self) -> usize {
        self.u.len()
    }

    pub fn sample_len(&self) -> usize {
        self.u[0].len()
    }

    pub fn freq_len(&self) -> usize {
        self.v[0].len()
    }

    pub fn u(&self, r: usize) -> &[Complex64] {
        &self.u[r]
    }

    pub fn v(&self, r: usize) -> &[Complex64] {
        &self.v[r]
    }

    /// `Σ_r U_jr V_kr`.
    pub fn entry(&self, j: usize, k: usize) -> Complex64 {
        self.u
            .iter()
            .zip(&self.v)
            .map(|(u, v)| u[j] * v[k])
            .sum()
    }

    /// Factors of the Hadamard product of two low-rank matrices: every pair of
    /// columns multiplied entrywise, ordered with `other`'s index fastest.
    pub fn hadamard(&self, other: &LowRankFactors) -> Result<LowRankFactors> {
        if self.sample_len() != other.sample_len() || self.freq_len() != other.freq_len() {
            return Err(NufftError::InvalidArgument(
                "Hadamard product of factors with different shapes".into(),
            ));
        }
        let mut u = Vec::with_capacity(self.rank() * other.rank());
        let mut v = Vec::with_capacity(self.rank() * other.rank());
        for (ua, va) in self.u.iter().zip(&self.v) {
            for (ub, vb) in other.u.iter().zip(&other.v) {
                u.push(ua.iter().zip(ub).map(|(a, b)| a * b).collect());
                v.push(va.iter().zip(vb).map(|(a, b)| a * b).collect());
            }
        }
        Ok(LowRankFactors { u, v })
    }
}

/// Build `(u_r, v_r)` approximating `A_jk = exp(-2πi δ_j ω̂_k)` where
/// `ω̂_k = omega_scaled[k] ∈ [0, 1]` and `|δ_j| ≤ gamma ≤ 1/2`.
///
/// The halving of the `r = 0` term is folded into `v_0`.
pub fn build_factors(
    delta: &[f64],
    gamma: f64,
    omega_scaled: &[f64],
    epsilon: f64,
) -> Result<LowRankFactors> {
    check_epsilon(epsilon)?;
    check_finite_reals(delta, "delta")?;
    check_finite_reals(omega_scaled, "omega_scaled")?;
    check_gamma(gamma)?;
    if delta.is_empty() || omega_scaled.is_empty() {
        return Err(NufftError::InvalidArgument("empty samples or frequencies".into()));
    }
    let slack = 1e-12;
    if let Some(j) = delta.iter().position(|d| d.abs() > gamma + slack) {
        return Err(NufftError::Domain(format!(
            "|delta[{j}]| = {} exceeds gamma = {gamma}",
            delta[j].abs()
        )));
    }
    if let Some(k) = omega_scaled
        .iter()
        .position(|w| *w < -slack || *w > 1.0 + slack)
    {
        return Err(NufftError::Domain(format!(
            "scaled frequency {k} = {} lies outside [0, 1]",
            omega_scaled[k]
        )));
    }
    if gamma == 0.0 || omega_scaled.iter().all(|w| *w == 0.0) {
        return Ok(LowRankFactors::ones(delta.len(), omega_scaled.len()));
    }

    let rank = required_rank(gamma, epsilon)?;
    if omega_scaled.len() <= rank {
        return Ok(exact_columns(delta, omega_scaled));
    }
    let coeffs = cheb_coefficients(gamma, rank)?;

    let scaled: Vec<f64> = delta.iter().map(|d| (d / gamma).clamp(-1.0, 1.0)).collect();
    let t_sample = cheb_eval_matrix(&scaled, rank)?;
    let mapped: Vec<f64> = omega_scaled
        .iter()
        .map(|w| (2.0 * w - 1.0).clamp(-1.0, 1.0))
        .collect();
    let t_freq = cheb_eval_matrix(&mapped, rank)?;
    let phase: Vec<Complex64> = delta
        .iter()
        .map(|d| Complex64::from_polar(1.0, -std::f64::consts::PI * d))
        .collect();

    let mut u = Vec::with_capacity(rank);
    let mut v = Vec::with_capacity(rank);
    for r in 0..rank {
        let mut column = vec![ZERO; delta.len()];
        // Only p with the parity of r contribute.
        for p in (r % 2..rank).step_by(2) {
            let weight = if p == 0 { 0.5 } else { 1.0 };
            let a = coeffs.get(p, r) * weight;
            for (out, t) in column.iter_mut().zip(&t_sample[p]) {
                *out += a * t;
            }
        }
        for (out, ph) in column.iter_mut().zip(&phase) {
            *out *= ph;
        }
        u.push(column);

        let weight = if r == 0 { 0.5 } else { 1.0 };
        v.push(
            t_freq[r]
                .iter()
                .map(|t| Complex64::new(weight * t, 0.0))
                .collect(),
        );
    }
    LowRankFactors::from_columns(u, v)
}

/// `u_k = A(:, k)`, `v_k = e_k`: exact, and no larger than the expansion
/// when there are at most `K` frequencies.
fn exact_columns(delta: &[f64], omega_scaled: &[f64]) -> LowRankFactors {
    let m = omega_scaled.len();
    let mut u = Vec::with_capacity(m);
    let mut v = Vec::with_capacity(m);
    for (k, w) in omega_scaled.iter().enumerate() {
        u.push(
            delta
                .iter()
                .map(|d| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * d * w))
                .collect(),
        );
        let mut e = vec![ZERO; m];
        e[k] = Complex64::new(1.0, 0.0);
        v.push(e);
    }
    LowRankFactors { u, v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    /// Exact correction-matrix entry; the phase `δω̂` is small so a direct
    /// product loses nothing.
    fn exact_entry(delta: f64, omega_scaled: f64) -> Complex64 {
        Complex64::from_polar(1.0, -2.0 * PI * delta * omega_scaled)
    }

    fn max_reconstruction_error(f: &LowRankFactors, delta: &[f64], omega_scaled: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for (j, d) in delta.iter().enumerate() {
            for (k, w) in omega_scaled.iter().enumerate() {
                worst = worst.max((f.entry(j, k) - exact_entry(*d, *w)).norm());
            }
        }
        worst
    }

    fn series_j(order: u32, z: f64) -> f64 {
        let mut sum = 0.0;
        let mut fact_m = 1.0;
        for m in 0..40u32 {
            if m > 0 {
                fact_m *= m as f64;
            }
            let fact_mn: f64 = (1..=(m + order)).map(|i| i as f64).product();
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * (z / 2.0).powi((2 * m + order) as i32) / (fact_m * fact_mn);
        }
        sum
    }

    #[test]
    fn parity_zeros_are_exact() {
        for &gamma in &[0.5, 0.25, 1.0 / 32.0] {
            let a = cheb_coefficients(gamma, 17).unwrap();
            for p in 0..17 {
                for r in 0..17 {
                    let v = a.get(p, r);
                    if (p + r) % 2 == 1 {
                        assert_eq!(v, ZERO);
                    } else if r % 2 == 0 {
                        assert_eq!(v.im, 0.0);
                    } else {
                        assert_eq!(v.re, 0.0);
                    }
                }
            }
        }
        let a = cheb_coefficients(0.5, 2).unwrap();
        assert_eq!(a.get(0, 1), ZERO);
        assert_eq!(a.get(1, 0), ZERO);
    }

    #[test]
    fn coefficient_examples() {
        let a = cheb_coefficients(0.5, 1).unwrap();
        let j0 = series_j(0, -PI / 4.0);
        assert!((a.get(0, 0).re - 4.0 * j0 * j0).abs() < 1e-15);

        let a = cheb_coefficients(0.25, 3).unwrap();
        let j1 = series_j(1, -PI / 8.0);
        assert!((a.get(0, 2).re + 4.0 * j1 * j1).abs() < 1e-15);
        // a_20 = 4 J_1 J_{-1} = -4 J_1^2 as well (i^0 = 1, J_{-1} = -J_1).
        assert!((a.get(2, 0).re + 4.0 * j1 * j1).abs() < 1e-15);
    }

    #[test]
    fn zero_gamma_is_rejected_by_coefficients() {
        assert!(matches!(
            cheb_coefficients(0.0, 3),
            Err(NufftError::InvalidArgument(_))
        ));
    }

    #[test]
    fn select_rank_examples() {
        assert_eq!(select_rank(0.4, 2.2e-16).unwrap(), 16);
        assert_eq!(select_rank(0.0, 0.3).unwrap(), 1);
        assert_eq!(select_rank(1.0 / 40.0, 9.8e-4).unwrap(), 3);
        assert!(select_rank(0.1, 0.0).is_err());
        assert!(select_rank(0.1, 1.0).is_err());
        assert!(select_rank(0.6, 1e-3).is_err());
    }

    #[test]
    fn tabulated_entries_across_each_window() {
        for (eps, row) in RANK_TABLE {
            for scale in [0.5, 0.9, 1.0, 1.7, 2.0] {
                for (col, &edge) in GAMMA_BRACKETS.iter().enumerate() {
                    let lower = if col == 0 { 1e-6 } else { GAMMA_BRACKETS[col - 1] };
                    for gamma in [edge, 0.5 * (lower + edge), lower + 1e-9] {
                        assert_eq!(select_rank(gamma, eps * scale).unwrap(), row[col]);
                    }
                }
            }
        }
    }

    /// Brute-force scan of the tail bound `140 (5γ/(K-1))^(K-1) ≤ ε`.
    fn brute_force_rank(gamma: f64, eps: f64) -> usize {
        (3..=60)
            .find(|&k| 140.0 * (5.0 * gamma / (k - 1) as f64).powi(k as i32 - 1) <= eps)
            .unwrap()
    }

    #[test]
    fn formula_rank_matches_brute_force() {
        assert_eq!(formula_rank(0.5, 1e-5).unwrap(), brute_force_rank(0.5, 1e-5));
        assert_eq!(formula_rank(0.5, 1e-5).unwrap(), 13);
        // Between the single and half windows the tabulated single-precision
        // rank already suffices.
        assert_eq!(select_rank(0.5, 1e-5).unwrap(), 10);
        assert_eq!(formula_rank(0.5, 1e-2).unwrap(), 10);
        assert_eq!(select_rank(0.5, 1e-2).unwrap(), 7);
        for &g in &[0.01, 0.1, 0.2, 0.33, 0.5] {
            for &e in &[1e-2, 1e-5, 1e-9, 1e-12] {
                assert_eq!(formula_rank(g, e).unwrap(), brute_force_rank(g, e), "{g} {e}");
            }
        }
    }

    #[test]
    fn tiny_precision_hits_the_cap() {
        assert!(matches!(select_rank(0.5, 1e-300), Err(NufftError::Domain(_))));
    }

    #[test]
    fn certified_rank_reproduces_single_and_half_rows() {
        for (eps, row) in [(1.2e-7, [5, 6, 7, 8, 10]), (9.8e-4, [3, 3, 4, 5, 7])] {
            for (gamma, want) in GAMMA_BRACKETS.iter().zip(row) {
                assert_eq!(certified_rank(*gamma, eps).unwrap(), want);
            }
        }
    }

    #[test]
    fn required_rank_in_double_precision() {
        let want = [9, 10, 12, 14, 17];
        for (gamma, k) in GAMMA_BRACKETS.iter().zip(want) {
            assert_eq!(required_rank(*gamma, 2.2e-16).unwrap(), k);
        }
        // Interior of a bracket can be covered by the tabulated rank.
        assert_eq!(required_rank(0.3, 2.2e-16).unwrap(), 16);
    }

    #[test]
    fn cheb_eval_examples() {
        assert_eq!(cheb_eval_matrix(&[1.0], 4).unwrap(), vec![vec![1.0]; 4]);
        let cols = cheb_eval_matrix(&[0.0], 5).unwrap();
        let row: Vec<f64> = cols.iter().map(|c| c[0]).collect();
        assert_eq!(row, vec![1.0, 0.0, -1.0, 0.0, 1.0]);
        let cols = cheb_eval_matrix(&[0.3], 4).unwrap();
        for (p, c) in cols.iter().enumerate() {
            assert!((c[0] - (p as f64 * 0.3f64.acos()).cos()).abs() < 1e-15);
        }
        assert!(cheb_eval_matrix(&[1.1], 3).is_err());
        assert!(cheb_eval_matrix(&[1.0 + 1e-13], 3).is_ok());
    }

    #[test]
    fn zero_delta_reconstructs_ones() {
        let f = build_factors(&[0.0; 5], 0.0, &[0.0, 0.5, 1.0], 1e-10).unwrap();
        assert_eq!(f.rank(), 1);
        assert_eq!(max_reconstruction_error(&f, &[0.0; 5], &[0.0, 0.5, 1.0]), 0.0);
    }

    #[test]
    fn random_delta_reconstruction_double() {
        let n = 16;
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let delta: Vec<f64> = (0..n).map(|_| rng.random_range(-0.5..=0.5)).collect();
        let gamma = delta.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        let omega: Vec<f64> = (0..n).map(|k| k as f64 / n as f64).collect();
        let f = build_factors(&delta, gamma, &omega, 2.2e-16).unwrap();
        assert!(max_reconstruction_error(&f, &delta, &omega) <= 2.0 * 2.2e-16 * 10.0);
    }

    #[test]
    fn half_precision_small_gamma() {
        let n = 8;
        let gamma = 1.0 / 32.0;
        let delta: Vec<f64> = (0..n)
            .map(|j| gamma * (2.0 * j as f64 / (n - 1) as f64 - 1.0))
            .collect();
        let omega: Vec<f64> = (0..n).map(|k| k as f64 / n as f64).collect();
        let f = build_factors(&delta, gamma, &omega, 9.8e-4).unwrap();
        assert_eq!(f.rank(), 3);
        assert!(max_reconstruction_error(&f, &delta, &omega) <= 9.8e-4);
    }

    #[test]
    fn delta_outside_gamma_is_rejected() {
        assert!(build_factors(&[0.3], 0.2, &[0.5], 1e-8).is_err());
        assert!(build_factors(&[0.1], 0.2, &[1.5], 1e-8).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn tail_bound_holds_for_formula_rank(gamma in 0.001f64..0.5, log_eps in -15.0f64..-1.0) {
            let eps = 10f64.powf(log_eps);
            let k = formula_rank(gamma, eps).unwrap();
            prop_assert!(k >= 3);
            prop_assert!(140.0 * (5.0 * gamma / (k - 1) as f64).powi(k as i32 - 1) <= eps);
        }

        #[test]
        fn select_rank_is_monotone(g1 in 0.0f64..0.5, g2 in 0.0f64..0.5, e1 in -15.5f64..-0.5, e2 in -15.5f64..-0.5) {
            let (glo, ghi) = if g1 <= g2 { (g1, g2) } else { (g2, g1) };
            let eps = 10f64.powf(e1);
            prop_assert!(select_rank(glo, eps).unwrap() <= select_rank(ghi, eps).unwrap());
            let (elo, ehi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
            let gamma = g1;
            prop_assert!(select_rank(gamma, 10f64.powf(elo)).unwrap() >= select_rank(gamma, 10f64.powf(ehi)).unwrap());
        }

        #[test]
        fn reconstruction_within_ten_eps(n in 1usize..=64, seed in any::<u64>(), gamma in 0.001f64..=0.5, which in 0usize..3) {
            let eps = [2.2e-16, 1.2e-7, 9.8e-4][which];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let delta: Vec<f64> = (0..n).map(|_| rng.random_range(-gamma..=gamma)).collect();
            let omega: Vec<f64> = (0..n).map(|k| k as f64 / n as f64).collect();
            let f = build_factors(&delta, gamma, &omega, eps).unwrap();
            prop_assert!(max_reconstruction_error(&f, &delta, &omega) <= 10.0 * eps);
        }
    }
}
