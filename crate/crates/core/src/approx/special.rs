//! Bessel functions of integer order for small arguments, and the principal
//! branch of the Lambert-W function on `[0, ∞)`.

use crate::error::{NufftError, Result};

/// Largest `|z|` accepted by [`bessel_j_int`]. The coefficient formula only
/// needs `|z| ≤ π/4`.
pub const BESSEL_MAX_ARG: f64 = 2.0;

/// `J_n(z)` for integer `n ≥ 0` and `|z| ≤ 2` by the ascending power series
///
/// `J_n(z) = Σ_m (-1)^m (z/2)^(2m+n) / (m! (m+n)!)`.
///
/// For `|z| ≤ 2` the terms decrease monotonically after the first, so the
/// series is summed until the next term no longer changes the result.
///
/// # Panics
///
/// If `|z| > 2` or `z` is not finite.
pub fn bessel_j_int(order: u32, z: f64) -> f64 {
    assert!(
        z.is_finite() && z.abs() <= BESSEL_MAX_ARG,
        "bessel_j_int: |z| must be at most {BESSEL_MAX_ARG}, got {z}"
    );
    let half = 0.5 * z;
    // (z/2)^n / n!, built incrementally to avoid overflow for large orders.
    let mut term = 1.0;
    for k in 1..=order {
        term *= half / k as f64;
    }
    if term == 0.0 {
        return 0.0;
    }
    let q = half * half;
    let mut sum = term;
    let mut m = 0u32;
    loop {
        m += 1;
        term *= -q / (m as f64 * (m + order) as f64);
        let next = sum + term;
        if next == sum || m > 200 {
            return next;
        }
        sum = next;
    }
}

/// `J_n(z)` for any integer order, using `J_{-n}(z) = (-1)^n J_n(z)`.
pub fn bessel_j_signed(order: i64, z: f64) -> f64 {
    let value = bessel_j_int(order.unsigned_abs() as u32, z);
    if order < 0 && order % 2 != 0 {
        -value
    } else {
        value
    }
}

/// Principal branch `W(x)` of the Lambert-W function, `W(x) e^{W(x)} = x`, for
/// `x ≥ 0`.
///
/// Halley iteration from `log(1 + x)`, capped at 50 steps.
pub fn lambert_w(x: f64) -> Result<f64> {
    if x.is_nan() || x < 0.0 {
        return Err(NufftError::Domain(format!(
            "lambert_w is only implemented on [0, inf), got {x}"
        )));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let mut w = x.ln_1p().max(0.0);
    for _ in 0..50 {
        let ew = w.exp();
        let f = w * ew - x;
        if f.abs() <= 1e-14 * x {
            break;
        }
        let wp1 = w + 1.0;
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 4.0 * f64::EPSILON * w.abs() {
            break;
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, FRAC_PI_4};

    /// Ascending series with every term computed from scratch (powers and
    /// factorials), independent of the incremental recurrence above.
    fn series_oracle(order: u32, z: f64, terms: u32) -> f64 {
        let factorial = |k: u32| (1..=k).fold(1.0f64, |acc, i| acc * i as f64);
        (0..terms)
            .map(|m| {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let power = (z / 2.0).powi((2 * m + order) as i32);
                let denom = factorial(m) * factorial(m + order);
                if power == 0.0 || !denom.is_finite() {
                    0.0
                } else {
                    sign * power / denom
                }
            })
            .sum()
    }

    #[test]
    fn bessel_at_zero() {
        assert_eq!(bessel_j_int(0, 0.0), 1.0);
        for n in 1..10 {
            assert_eq!(bessel_j_int(n, 0.0), 0.0);
        }
    }

    #[test]
    fn bessel_tabulated_values() {
        // Values from standard tables.
        assert!((bessel_j_int(0, 0.5) - 0.938_469_807_240_813).abs() < 1e-15);
        assert!((bessel_j_int(1, 0.5) - 0.242_268_457_674_873_9).abs() < 1e-15);
        assert!((bessel_j_int(0, 1.0) - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_j_int(2, 2.0) - 0.352_834_028_615_637_75).abs() < 1e-15);
    }

    #[test]
    fn bessel_j1_half_matches_series() {
        let want = series_oracle(1, 0.5, 30);
        assert!((bessel_j_int(1, 0.5) - want).abs() < 1e-16);
    }

    #[test]
    fn bessel_matches_series_on_working_range() {
        for order in 0..=40 {
            for i in 0..=40 {
                let z = -FRAC_PI_4 + 2.0 * FRAC_PI_4 * i as f64 / 40.0;
                let got = bessel_j_int(order, z);
                let want = series_oracle(order, z, 50);
                assert!((got - want).abs() <= 1e-15, "J_{order}({z}): {got} vs {want}");
            }
        }
    }

    #[test]
    fn bessel_negative_order_and_argument_symmetry() {
        for n in 0..8i64 {
            let z = 0.6;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(bessel_j_signed(-n, z), sign * bessel_j_signed(n, z));
            assert!((bessel_j_int(n as u32, -z) - sign * bessel_j_int(n as u32, z)).abs() < 1e-17);
        }
    }

    #[test]
    #[should_panic]
    fn bessel_rejects_large_argument() {
        bessel_j_int(0, 3.0);
    }

    #[test]
    fn lambert_w_examples() {
        assert_eq!(lambert_w(0.0).unwrap(), 0.0);
        assert!((lambert_w(E).unwrap() - 1.0).abs() < 1e-15);

        // Bisection oracle on [0, 10] for W(10).
        let (mut lo, mut hi) = (0.0f64, 10.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid.exp() < 10.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let w = lambert_w(10.0).unwrap();
        assert!((w - lo).abs() < 1e-14);
        assert!((w * w.exp() - 10.0).abs() <= 1e-13 * 10.0);
    }

    #[test]
    fn lambert_w_rejects_negative() {
        assert!(matches!(lambert_w(-0.1), Err(NufftError::Domain(_))));
        assert!(lambert_w(f64::NAN).is_err());
    }

    #[test]
    fn lambert_w_defining_equation_on_log_grid() {
        for i in 0..=900 {
            let x = 10f64.powf(-3.0 + 9.0 * i as f64 / 900.0);
            let w = lambert_w(x).unwrap();
            assert!(w >= 0.0);
            let residual = (w * w.exp() - x).abs() / x;
            assert!(residual <= 1e-13, "x = {x}: residual {residual}");
        }
    }
}
