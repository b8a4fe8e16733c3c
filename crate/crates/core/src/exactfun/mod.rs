//! Closed function classes for separated eigenfunctions.
//!
//! [`RadialFunction`] is `r^s (Σ c_k r^k) e^{αr + βr²}` and
//! [`AngularFunction`] is `sin^aθ · q(cosθ)`. Both are closed under every
//! operator the quantum modules apply, so identities are checked by
//! comparing canonical coefficients.

mod angular;
mod poly;
mod radial;

pub use angular::{AngularFunction, AngularSum};
pub use radial::{RadialFunction, RadialSum};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FunctionError {
    #[error("exponent mismatch: cannot add functions with different exp(αr+βr²) factors")]
    ExponentMismatch,
    #[error("power offset {0} between summands is not an integer")]
    NonIntegerOffset(String),
    #[error("result leaves the closed class: {0}")]
    NotRepresentable(String),
    #[error("norm integral diverges: {0}")]
    Divergent(String),
    #[error("scale factor must be positive")]
    NonPositiveScale,
    #[error("value is not representable in the exact field: {0}")]
    Inexact(String),
    #[error("malformed function data: {0}")]
    Malformed(String),
}

/// Plain azimuthal factor `e^{imφ}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct AzimuthalMode {
    pub m: i64,
}

impl AzimuthalMode {
    pub fn new(m: i64) -> Self {
        Self { m }
    }

    pub fn eval(&self, phi: f64) -> crate::scalar::C64 {
        crate::scalar::C64::from_polar(1.0, self.m as f64 * phi)
    }
}
