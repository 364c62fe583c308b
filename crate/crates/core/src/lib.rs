//! Nonuniform fast Fourier transforms built from a handful of ordinary FFTs.
//!
//! The nonuniform DFT matrix is written as a Hadamard product of a (row-selected)
//! DFT matrix and a correction matrix `A` whose entries `exp(-2πi δ_j ω_k / N)`
//! are smooth in both the grid offset `δ_j` and the scaled frequency `ω_k / N`.
//! A truncated bivariate Chebyshev expansion turns `A` into a rank-`K` matrix
//! `Σ_r u_r v_rᵀ`, so that
//!
//! ```text
//! F̃ c ≈ Σ_r  D(u_r) · F(t,:) · D(v_r) · c
//! ```
//!
//! costs `K` FFTs of the original size. `K` is 1 for equispaced samples and at
//! most 17 in double precision.
//!
//! Modules:
//!
//! * [`fft`]: forward/inverse FFT conventions and dense containers.
//! * [`approx`]: special functions, Chebyshev coefficients, rank selection and the
//!   low-rank factors.
//! * [`transforms`]: one-dimensional types I, II and III.
//! * [`inverse`]: inverse types I and II via conjugate gradients on Toeplitz normal
//!   equations.
//! * [`transform2d`]: two-dimensional type II.
//! * [`oracle`]: brute-force references and adversarial sample families.
//!
//! ```
//! use nufft::transforms::Plan2;
//! use num_complex::Complex64;
//!
//! let x = [0.01, 0.26, 0.49, 0.77];
//! let plan = Plan2::new(&x, 1e-15).unwrap();
//! let c = [Complex64::new(1.0, 0.0); 4];
//! let f = plan.execute(&c).unwrap();
//! assert_eq!(f.len(), 4);
//! ```

pub mod approx;
pub mod error;
pub mod fft;
pub mod inverse;
pub mod oracle;
pub mod transform2d;
pub mod transforms;

pub use error::{NufftError, Result};
pub use fft::ComplexMatrix;
pub use num_complex::Complex64;

/// Double-precision working accuracy.
pub const EPS_DOUBLE: f64 = 2.2e-16;
/// Single-precision working accuracy.
pub const EPS_SINGLE: f64 = 1.2e-7;
/// Half-precision working accuracy.
pub const EPS_HALF: f64 = 9.8e-4;
