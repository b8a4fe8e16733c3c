//! Quantum operators on separated eigenfunctions.
//!
//! Units follow `2m = ħ = 1`. Every operator acts exactly on the closed
//! function classes, so an identity between operators is checked by
//! applying both sides to the same function and comparing coefficients.

pub mod angular;
pub mod ho;
pub mod kc;
mod state;

pub use angular::AngularPair;
pub use state::SeparatedState;

use num_complex::Complex;
use thiserror::Error;

use crate::exactfun::{AngularFunction, AngularSum, FunctionError, RadialFunction, RadialSum};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QmError {
    #[error("invalid quantum numbers: {0}")]
    InvalidLabels(String),
    #[error("operator parameter out of range: {0}")]
    Parameter(String),
    #[error(transparent)]
    Function(#[from] FunctionError),
}

/// `Σ c · r^p · ∂_r^d f` over `(d, p, c)` triples with `d ≤ 2`.
pub(crate) fn radial_combo<R: Real>(f: &RadialFunction<R>, terms: &[(usize, i64, Complex<R>)]) -> RadialFunction<R> {
    if f.is_zero() {
        return RadialFunction::zero();
    }
    let d1 = terms.iter().any(|t| t.0 >= 1).then(|| f.derivative());
    let d2 = terms.iter().any(|t| t.0 == 2).then(|| d1.as_ref().unwrap().derivative());
    let mut sum = RadialSum::new();
    for (d, p, c) in terms {
        let g = match d {
            0 => f,
            1 => d1.as_ref().unwrap(),
            _ => d2.as_ref().unwrap(),
        };
        sum.add(c.clone(), *p, g).expect("derivatives share the exponent factor");
    }
    sum.finish()
}

/// `Σ c · sin^k θ · cos^j θ · ∂_θ^d g` over `(d, k, j, c)`.
pub(crate) fn angular_combo<R: Real>(
    g: &AngularFunction<R>,
    terms: &[(usize, i64, usize, Complex<R>)],
) -> Result<AngularFunction<R>, FunctionError> {
    if g.is_zero() {
        return Ok(AngularFunction::zero());
    }
    let d1 = terms.iter().any(|t| t.0 >= 1).then(|| g.derivative());
    let d2 = terms.iter().any(|t| t.0 == 2).then(|| d1.as_ref().unwrap().derivative());
    let mut sum = AngularSum::new();
    for (d, k, j, c) in terms {
        let h = match d {
            0 => g,
            1 => d1.as_ref().unwrap(),
            _ => d2.as_ref().unwrap(),
        };
        sum.add(c.clone(), *k, *j, h);
    }
    sum.finish()
}

/// Checks `n ≥ ℓ ≥ |m| ≥ 0`.
pub(crate) fn check_labels(n: i64, ell: i64, m: i64) -> Result<(), QmError> {
    if ell < 0 || n < ell || m.abs() > ell {
        return Err(QmError::InvalidLabels(format!("need n >= l >= |m| >= 0, got n={n} l={ell} m={m}")));
    }
    Ok(())
}
