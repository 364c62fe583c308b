use thiserror::Error;

use crate::inverse::CgReport;

#[derive(Debug, Error)]
pub enum NufftError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An input lies outside the domain an operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    /// The problem is well-formed but the solver precondition does not hold
    /// (for instance, an inverse transform requested with `gamma >= 1/2`).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Conjugate gradients hit the iteration cap; carries the best iterate.
    #[error(
        "conjugate gradients did not converge in {} iterations (relative residual {:.3e})",
        .0.iterations,
        .0.relative_residual
    )]
    NotConverged(Box<CgReport>),
}

impl NufftError {
    /// True for errors caused by inputs outside an operation's domain, as
    /// opposed to malformed arguments.
    pub fn is_domain(&self) -> bool {
        matches!(self, NufftError::Domain(_) | NufftError::Precondition(_))
    }
}

pub type Result<T> = std::result::Result<T, NufftError>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(NufftError::LengthMismatch { expected, found })
    }
}

pub(crate) fn check_finite_reals(values: &[f64], what: &str) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        None => Ok(()),
        Some(i) => Err(NufftError::InvalidArgument(format!(
            "{what}[{i}] is not finite ({})",
            values[i]
        ))),
    }
}

pub(crate) fn check_finite(values: &[num_complex::Complex64], what: &str) -> Result<()> {
    match values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
        None => Ok(()),
        Some(i) => Err(NufftError::InvalidArgument(format!(
            "{what}[{i}] is not finite ({})",
            values[i]
        ))),
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(NufftError::Domain(format!(
            "working precision must lie in (0, 1), got {epsilon}"
        )))
    }
}
