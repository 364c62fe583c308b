use crate::error::{check_finite_reals, NufftError, Result};

/// Reduce samples into `[0, 1)` using period-1 periodicity.
pub fn normalize_samples(x_raw: &[f64]) -> Result<Vec<f64>> {
    check_finite_reals(x_raw, "samples")?;
    Ok(x_raw.iter().map(|&x| wrap_unit(x)).collect())
}

pub(crate) fn wrap_unit(x: f64) -> f64 {
    let y = x - x.floor();
    // -1e-20 - floor(-1e-20) rounds to exactly 1.0
    if y >= 1.0 {
        0.0
    } else {
        y
    }
}

const SNAP: f64 = 4.0 * f64::EPSILON;

/// Samples assigned to their nearest node on an equispaced grid of size `grid`.
///
/// For each sample, `s_j = round(grid · x_j)` (ties away from zero), the node
/// actually used is `t_j = s_j mod grid`, and `delta_j = grid · x_j - s_j` lies
/// in `[-1/2, 1/2]`. `gamma` is the largest `|delta_j|`.
#[derive(Debug, Clone)]
pub struct SampleSet {
    grid: usize,
    x: Vec<f64>,
    s: Vec<usize>,
    t: Vec<usize>,
    delta: Vec<f64>,
    gamma: f64,
}

impl SampleSet {
    /// Assign normalized samples `x ∈ [0, 1)` to a grid of size `grid`.
    pub fn new(x: &[f64], grid: usize) -> Result<Self> {
        check_finite_reals(x, "samples")?;
        if let Some(j) = x.iter().position(|v| !(0.0..1.0).contains(v)) {
            return Err(NufftError::InvalidArgument(format!(
                "sample {j} = {} is not normalized to [0, 1)",
                x[j]
            )));
        }
        if grid == 0 {
            return Err(NufftError::InvalidArgument("grid size must be at least 1".into()));
        }
        let n = grid as f64;
        // grid · x carried as an unevaluated sum hi + lo, so delta is exact up
        // to its own rounding rather than that of grid · x.
        let parts = x.iter().map(|&v| {
            let hi = v * n;
            (hi, v.mul_add(n, -hi))
        });
        Ok(Self::assign(parts, x.to_vec(), grid))
    }

    /// Assign positions already expressed in grid units, `z_j = grid · x_j`
    /// with `z_j ∈ [0, grid]`. Keeps integer positions exact, which matters for
    /// integer frequencies in the type-I transform.
    pub fn from_scaled(scaled: &[f64], grid: usize) -> Result<Self> {
        if grid == 0 {
            return Err(NufftError::InvalidArgument("grid size must be at least 1".into()));
        }
        check_finite_reals(scaled, "scaled samples")?;
        let n = grid as f64;
        if let Some(j) = scaled.iter().position(|z| *z < 0.0 || *z > n) {
            return Err(NufftError::InvalidArgument(format!(
                "scaled sample {j} = {} lies outside [0, {grid}]",
                scaled[j]
            )));
        }
        let x = scaled.iter().map(|z| z / n).collect();
        Ok(Self::assign(scaled.iter().map(|&z| (z, 0.0)), x, grid))
    }

    fn assign(parts: impl Iterator<Item = (f64, f64)>, x: Vec<f64>, grid: usize) -> Self {
        let mut s = Vec::with_capacity(x.len());
        let mut t = Vec::with_capacity(x.len());
        let mut delta = Vec::with_capacity(x.len());
        let mut gamma = 0.0f64;
        for (hi, lo) in parts {
            let mut node = hi.round();
            let mut d = (hi - node) + lo;
            if d > 0.5 {
                node += 1.0;
                d -= 1.0;
            } else if d < -0.5 && node > 0.0 {
                node -= 1.0;
                d += 1.0;
            }
            // Offsets at the rounding level of `grid · x` are noise, e.g.
            // (j / N) · N need not come back as exactly j.
            if d.abs() <= SNAP * node.max(1.0) {
                d = 0.0;
            }
            let sj = node as usize;
            s.push(sj);
            t.push(sj % grid);
            delta.push(d);
            gamma = gamma.max(d.abs());
        }
        Self {
            grid,
            x,
            s,
            t,
            delta,
            gamma: gamma.min(0.5),
        }
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Normalized samples in `[0, 1]`.
    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn s(&self) -> &[usize] {
        &self.s
    }

    pub fn t(&self) -> &[usize] {
        &self.t
    }

    /// `grid · x_j - s_j`.
    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// True when no sample wrapped around (`s == t` everywhere).
    pub fn wraps_none(&self) -> bool {
        self.s.iter().zip(&self.t).all(|(s, t)| s == t)
    }
}

/// Nearest-node assignment `(s, t, gamma)` for normalized samples on a grid of
/// size `n`.
pub fn grid_assign(x: &[f64], n: usize) -> Result<(Vec<usize>, Vec<usize>, f64)> {
    let set = SampleSet::new(x, n)?;
    Ok((set.s, set.t, set.gamma))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_samples(&[0.25, 0.75]).unwrap(), vec![0.25, 0.75]);
        assert_eq!(normalize_samples(&[1.25, -0.25]).unwrap(), vec![0.25, 0.75]);
        let y = normalize_samples(&[-3.1]).unwrap();
        assert!((y[0] - 0.9).abs() < 1e-15);
        assert_eq!(normalize_samples(&[-1e-20]).unwrap(), vec![0.0]);
        assert!(normalize_samples(&[f64::NAN]).is_err());
        assert!(normalize_samples(&[f64::INFINITY]).is_err());
    }

    #[test]
    fn figure_example_assignment() {
        let x = [0.029, 0.044, 0.055, 0.425, 0.575, 0.638, 0.788, 0.944];
        let (s, t, gamma) = grid_assign(&x, 8).unwrap();
        assert_eq!(s, vec![0, 0, 0, 3, 5, 5, 6, 8]);
        assert_eq!(t, vec![0, 0, 0, 3, 5, 5, 6, 0]);
        assert!(gamma <= 0.5);
    }

    #[test]
    fn last_sample_wraps_to_zero() {
        let x = [0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.99];
        let set = SampleSet::new(&x, 8).unwrap();
        assert_eq!(set.s()[7], 8);
        assert_eq!(set.t()[7], 0);
        assert!(!set.wraps_none());
    }

    #[test]
    fn equispaced_samples_have_zero_gamma() {
        for n in [1, 4, 8, 64] {
            let x: Vec<f64> = (0..n).map(|j| j as f64 / n as f64).collect();
            let (s, t, gamma) = grid_assign(&x, n).unwrap();
            assert_eq!(s, (0..n).collect::<Vec<_>>());
            assert_eq!(t, s);
            assert_eq!(gamma, 0.0);
        }
    }

    #[test]
    fn rounding_noise_is_snapped_to_the_grid() {
        for n in [49, 100, 1000, 4097] {
            let x: Vec<f64> = (0..n).map(|j| j as f64 / n as f64).collect();
            assert_eq!(grid_assign(&x, n).unwrap().2, 0.0);
        }
    }

    #[test]
    fn ties_round_away_from_zero() {
        let set = SampleSet::from_scaled(&[0.5, 2.5], 4).unwrap();
        assert_eq!(set.s(), &[1, 3]);
        assert_eq!(set.gamma(), 0.5);
    }

    #[test]
    fn assignment_bound() {
        let n = 37;
        let x: Vec<f64> = (0..200).map(|i| (i as f64 * 0.618_033_988_7) % 1.0).collect();
        let set = SampleSet::new(&x, n).unwrap();
        for j in 0..x.len() {
            assert!((x[j] - set.s()[j] as f64 / n as f64).abs() <= 0.5 / n as f64 + 1e-15);
            assert!(set.t()[j] < n);
        }
    }

    #[test]
    fn unnormalized_samples_are_rejected() {
        assert!(SampleSet::new(&[1.0], 4).is_err());
        assert!(SampleSet::new(&[-0.1], 4).is_err());
        assert!(SampleSet::from_scaled(&[0.1], 0).is_err());
    }
}
