//! Scalars for phase-space evaluators: plain `f64`, or [`Jet`] which carries
//! the gradient with respect to the six canonical coordinates.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::scalar::C64;

pub trait Scalar:
    Copy
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn cst(x: f64) -> Self;
    fn val(self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn atan2(self, x: Self) -> Self;
    fn acos(self) -> Self;

    fn sq(self) -> Self {
        self * self
    }

    fn recip(self) -> Self {
        Self::cst(1.0) / self
    }
}

impl Scalar for f64 {
    fn cst(x: f64) -> Self {
        x
    }
    fn val(self) -> f64 {
        self
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn atan2(self, x: Self) -> Self {
        f64::atan2(self, x)
    }
    fn acos(self) -> Self {
        f64::acos(self)
    }
}

/// Forward-mode dual number over the six phase-space coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d: [f64; 6],
}

impl Jet {
    /// The `i`-th coordinate with value `v`.
    pub fn var(v: f64, i: usize) -> Self {
        let mut d = [0.0; 6];
        d[i] = 1.0;
        Self { v, d }
    }

    fn chain(self, v: f64, dv: f64) -> Self {
        Self { v, d: self.d.map(|x| x * dv) }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut d = self.d;
        d.iter_mut().zip(o.d).for_each(|(a, b)| *a += b);
        Jet { v: self.v + o.v, d }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        self + (-o)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { v: -self.v, d: self.d.map(|x| -x) }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut d = [0.0; 6];
        for (i, slot) in d.iter_mut().enumerate() {
            *slot = self.d[i] * o.v + self.v * o.d[i];
        }
        Jet { v: self.v * o.v, d }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let inv = 1.0 / o.v;
        let mut d = [0.0; 6];
        for (i, slot) in d.iter_mut().enumerate() {
            *slot = (self.d[i] - self.v * inv * o.d[i]) * inv;
        }
        Jet { v: self.v * inv, d }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, o: f64) -> Jet {
        Jet { v: self.v + o, d: self.d }
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, o: f64) -> Jet {
        Jet { v: self.v - o, d: self.d }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, o: f64) -> Jet {
        Jet { v: self.v * o, d: self.d.map(|x| x * o) }
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, o: f64) -> Jet {
        self * (1.0 / o)
    }
}

impl Scalar for Jet {
    fn cst(x: f64) -> Self {
        Jet { v: x, d: [0.0; 6] }
    }
    fn val(self) -> f64 {
        self.v
    }
    fn sin(self) -> Self {
        self.chain(self.v.sin(), self.v.cos())
    }
    fn cos(self) -> Self {
        self.chain(self.v.cos(), -self.v.sin())
    }
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s)
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e)
    }
    fn atan2(self, x: Self) -> Self {
        let den = self.v * self.v + x.v * x.v;
        let mut d = [0.0; 6];
        for (i, slot) in d.iter_mut().enumerate() {
            *slot = (x.v * self.d[i] - self.v * x.d[i]) / den;
        }
        Jet { v: self.v.atan2(x.v), d }
    }
    fn acos(self) -> Self {
        self.chain(self.v.acos(), -1.0 / (1.0 - self.v * self.v).sqrt())
    }
}

/// Complex value over a [`Scalar`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cplx<T> {
    pub re: T,
    pub im: T,
}

impl<T: Scalar> Cplx<T> {
    pub fn new(re: T, im: T) -> Self {
        Self { re, im }
    }

    pub fn real(re: T) -> Self {
        Self { re, im: T::cst(0.0) }
    }

    /// `i · x`.
    pub fn imag(im: T) -> Self {
        Self { re: T::cst(0.0), im }
    }

    /// `e^{iθ}`.
    pub fn expi(theta: T) -> Self {
        Self { re: theta.cos(), im: theta.sin() }
    }

    pub fn conj(self) -> Self {
        Self { re: self.re, im: -self.im }
    }

    pub fn scale(self, s: T) -> Self {
        Self { re: self.re * s, im: self.im * s }
    }

    pub fn norm_sqr(self) -> T {
        self.re * self.re + self.im * self.im
    }

    pub fn arg(self) -> T {
        self.im.atan2(self.re)
    }

    pub fn value(self) -> C64 {
        C64::new(self.re.val(), self.im.val())
    }
}

impl<T: Scalar> Add for Cplx<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { re: self.re + o.re, im: self.im + o.im }
    }
}

impl<T: Scalar> Sub for Cplx<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { re: self.re - o.re, im: self.im - o.im }
    }
}

impl<T: Scalar> Neg for Cplx<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl<T: Scalar> Mul for Cplx<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
}

impl<T: Scalar> Div for Cplx<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let den = o.norm_sqr();
        let num = self * o.conj();
        Self { re: num.re / den, im: num.im / den }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jet_product_rule() {
        let x = Jet::var(2.0, 0);
        let y = Jet::var(3.0, 1);
        let f = x * y.sin() / (x + 1.0);
        let h = 1e-6;
        let fx = |a: f64, b: f64| a * b.sin() / (a + 1.0);
        assert!((f.d[0] - (fx(2.0 + h, 3.0) - fx(2.0 - h, 3.0)) / (2.0 * h)).abs() < 1e-8);
        assert!((f.d[1] - (fx(2.0, 3.0 + h) - fx(2.0, 3.0 - h)) / (2.0 * h)).abs() < 1e-8);
    }

    #[test]
    fn jet_atan2_and_acos() {
        let y = Jet::var(0.3, 0);
        let x = Jet::var(-0.7, 1);
        let a = y.atan2(x);
        let r2 = 0.3f64 * 0.3 + 0.49;
        assert!((a.d[0] - (-0.7) / r2).abs() < 1e-14);
        assert!((a.d[1] - (-0.3) / r2).abs() < 1e-14);
        let c = Jet::var(0.2, 2).acos();
        assert!((c.d[2] + 1.0 / (1.0f64 - 0.04).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn complex_division_inverts_product() {
        let a = Cplx::new(1.5, -0.25);
        let b = Cplx::new(-0.5, 2.0);
        let q = (a * b) / b;
        assert!((q.re - a.re).abs() < 1e-15 && (q.im - a.im).abs() < 1e-15);
    }
}
