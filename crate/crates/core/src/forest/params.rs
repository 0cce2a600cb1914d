//! Conversions between edge lengths `ℓ ∈ [0, ∞]`, weights `λ = 1 - e^{-ℓ}`
//! and `μ = 1 - λ = e^{-ℓ}`.

use crate::error::{Error, Result};

/// Which coordinate a number (in a file, or on a chart) refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Param {
    #[default]
    Length,
    Lambda,
}

pub fn lambda_from_length(l: f64) -> Result<f64> {
    if l.is_nan() || l < 0.0 {
        return Err(Error::arg(format!("edge length must be nonnegative, got {l}")));
    }
    Ok(-(-l).exp_m1())
}

pub fn length_from_lambda(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(-(-lambda).ln_1p())
}

pub fn mu_from_lambda(lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    Ok(1.0 - lambda)
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::arg(format!("edge weight must lie in [0, 1], got {lambda}")));
    }
    Ok(())
}

/// `λ` from `ℓ` without validation, for hot loops that already hold valid data.
#[inline]
pub(crate) fn lam(l: f64) -> f64 {
    -(-l).exp_m1()
}

/// `ℓ` from `λ` without validation.
#[inline]
pub(crate) fn len(lambda: f64) -> f64 {
    -(-lambda).ln_1p()
}
