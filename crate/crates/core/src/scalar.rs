//! Coefficient fields for the closed function classes.
//!
//! Everything in [`crate::exactfun`] and the quantum operator modules is
//! generic over a [`Real`] field: `f64` for the fast default path and
//! [`Exact`] (arbitrary-precision rationals) for identity checks that must
//! come out exactly zero.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::{BigRational, Rational64};
use num_traits::{Num, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Exact rational scalar.
pub type Exact = BigRational;

/// Double-precision complex number.
pub type C64 = Complex<f64>;

/// Relative size below which an f64 coefficient that resulted from adding
/// several contributions is treated as exact cancellation.
pub const CANCELLATION_REL: f64 = 1e-12;

/// Coefficients with `|c|` below this are dropped outright.
pub const ABS_FLOOR: f64 = 1e-300;

/// Real scalar field used for exponents, parameters and (through
/// `Complex<Self>`) function coefficients.
pub trait Real: Clone + PartialEq + Debug + Num + Neg<Output = Self> + Send + Sync + 'static {
    /// True when arithmetic is exact and no tolerance may be applied.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_rational(q: Rational64) -> Self {
        Self::from_ratio(*q.numer(), *q.denom())
    }

    fn to_f64(&self) -> f64;

    /// Inexact float constants; exact fields refuse them.
    fn from_f64(x: f64) -> Option<Self>;

    /// Integer power; negative exponents require a nonzero base.
    fn powi(&self, e: i64) -> Self {
        let mut out = Self::one();
        let base = if e < 0 { Self::one() / self.clone() } else { self.clone() };
        for _ in 0..e.unsigned_abs() {
            out = out * base.clone();
        }
        out
    }

    /// `self^q` when representable in the field.
    fn pow_rational(&self, q: Rational64) -> Option<Self>;

    /// Square root when representable in the field.
    fn sqrt(&self) -> Option<Self>;

    fn is_positive(&self) -> bool;

    /// Equality for exponents and parameters: exact for exact fields,
    /// relative tolerance `rel` otherwise.
    fn close_to(&self, other: &Self, rel: f64) -> bool;
}

impl Real for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_f64(x: f64) -> Option<Self> {
        Some(x)
    }

    fn powi(&self, e: i64) -> Self {
        f64::powi(*self, e as i32)
    }

    fn pow_rational(&self, q: Rational64) -> Option<Self> {
        if q.is_integer() {
            Some(f64::powi(*self, q.to_integer() as i32))
        } else {
            Some(self.powf(*q.numer() as f64 / *q.denom() as f64))
        }
    }

    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }

    fn is_positive(&self) -> bool {
        *self > 0.0
    }

    fn close_to(&self, other: &Self, rel: f64) -> bool {
        let scale = self.abs().max(other.abs());
        (self - other).abs() <= rel * scale || self == other
    }
}

impl Real for BigRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn from_f64(_x: f64) -> Option<Self> {
        None
    }

    fn pow_rational(&self, q: Rational64) -> Option<Self> {
        if q.is_integer() {
            Some(Real::powi(self, q.to_integer()))
        } else if *q.denom() == 2 {
            Real::sqrt(self).map(|root| Real::powi(&root, *q.numer()))
        } else {
            None
        }
    }

    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        (&n * &n == *self.numer() && &d * &d == *self.denom()).then(|| BigRational::new(n, d))
    }

    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }

    fn close_to(&self, other: &Self, _rel: f64) -> bool {
        self == other
    }
}

/// `|c|` evaluated in f64.
pub fn cabs<R: Real>(c: &Complex<R>) -> f64 {
    c.re.to_f64().hypot(c.im.to_f64())
}

/// Convert a coefficient to f64 complex.
pub fn to_c64<R: Real>(c: &Complex<R>) -> C64 {
    C64::new(c.re.to_f64(), c.im.to_f64())
}

/// Real scalar lifted to a complex coefficient.
pub fn creal<R: Real>(x: R) -> Complex<R> {
    Complex::new(x, R::zero())
}

/// Integer lifted to a complex coefficient.
pub fn cint<R: Real>(v: i64) -> Complex<R> {
    creal(R::from_i64(v))
}

/// Exact (or absolute-floor) zero test for a single coefficient.
pub fn is_zero_coeff<R: Real>(c: &Complex<R>) -> bool {
    if R::EXACT {
        c.is_zero()
    } else {
        cabs(c) < ABS_FLOOR
    }
}

/// Which member of a raising/lowering pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// +1 or -1.
    pub fn factor(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn both() -> [Sign; 2] {
        [Sign::Plus, Sign::Minus]
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_sqrt_only_for_perfect_squares() {
        assert_eq!(Real::sqrt(&Exact::from_ratio(9, 4)), Some(Exact::from_ratio(3, 2)));
        assert_eq!(Real::sqrt(&Exact::from_ratio(2, 1)), None);
        assert_eq!(Real::sqrt(&Exact::from_ratio(-1, 1)), None);
    }

    #[test]
    fn exact_rational_powers() {
        let x = Exact::from_ratio(4, 9);
        assert_eq!(x.pow_rational(Rational64::new(3, 2)), Some(Exact::from_ratio(8, 27)));
        assert_eq!(x.pow_rational(Rational64::new(-1, 1)), Some(Exact::from_ratio(9, 4)));
        assert_eq!(x.pow_rational(Rational64::new(1, 3)), None);
    }

    #[test]
    fn float_close_to_is_relative() {
        assert!(1.0f64.close_to(&(1.0 + 1e-14), 1e-12));
        assert!(!1.0f64.close_to(&1.001, 1e-12));
        assert!(0.0f64.close_to(&0.0, 1e-12));
    }
}
