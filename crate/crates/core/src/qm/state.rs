use num_complex::Complex;
use num_traits::Zero;
use serde::Serialize;

use super::AngularPair;
use crate::exactfun::{AngularFunction, AzimuthalMode, RadialFunction};
use crate::scalar::{Real, C64};

/// `Ψ_{n,ℓ,m} = R(r) P(θ) e^{imφ}` with its labels.
#[derive(Clone, Debug, PartialEq)]
pub struct SeparatedState<R: Real = f64> {
    pub radial: RadialFunction<R>,
    pub angular: AngularFunction<R>,
    pub azimuthal: AzimuthalMode,
    pub n: i64,
    pub ell: i64,
    pub m: i64,
}

impl<R: Real> SeparatedState<R> {
    pub fn zero(n: i64, ell: i64, m: i64) -> Self {
        Self {
            radial: RadialFunction::zero(),
            angular: AngularFunction::zero(),
            azimuthal: AzimuthalMode::new(m),
            n,
            ell,
            m,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.radial.is_zero() || self.angular.is_zero()
    }

    pub fn pair(&self) -> AngularPair<R> {
        AngularPair { theta: self.angular.clone(), mode: self.azimuthal, ell: self.ell, m: self.m }
    }

    pub fn with_pair(self, pair: AngularPair<R>) -> Self {
        Self { angular: pair.theta, azimuthal: pair.mode, ell: pair.ell, m: pair.m, ..self }
    }

    /// `∫|Ψ|² d³x`.
    pub fn norm_sq(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        self.radial.norm_sq().unwrap_or(f64::INFINITY) * 2.0 * std::f64::consts::PI * self.angular.norm_sq()
    }

    pub fn eval(&self, r: f64, theta: f64, phi: f64) -> C64 {
        self.radial.eval(r) * self.angular.eval(theta) * self.azimuthal.eval(phi)
    }

    /// `c` with `self = c · other` as functions of `(r, θ, φ)`.
    pub fn proportional(&self, other: &Self, tol: f64) -> Option<Complex<R>> {
        if self.is_zero() {
            return Some(Complex::zero());
        }
        if other.is_zero() || self.azimuthal != other.azimuthal {
            return None;
        }
        let cr = self.radial.proportional(&other.radial, tol)?;
        let ca = self.angular.proportional(&other.angular, tol)?;
        Some(cr * ca)
    }
}

impl Serialize for SeparatedState<f64> {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("SeparatedState", 6)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("ell", &self.ell)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("radial", &self.radial)?;
        st.serialize_field("angular", &self.angular)?;
        st.serialize_field("azimuthal", &self.azimuthal)?;
        st.end()
    }
}
