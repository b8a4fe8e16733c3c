//! Dense polynomial helpers over complex coefficients, low degree first.

use num_complex::Complex;
use num_traits::Zero;

use crate::scalar::{cabs, is_zero_coeff, Real, ABS_FLOOR, CANCELLATION_REL};

/// Coefficient accumulator that remembers how large the summands were,
/// so that f64 cancellation can be recognised and zeroed.
#[derive(Clone, Debug)]
pub(crate) struct Accum<R: Real> {
    pub value: Complex<R>,
    pub mass: f64,
}

impl<R: Real> Accum<R> {
    pub fn zero() -> Self {
        Self { value: Complex::zero(), mass: 0.0 }
    }

    pub fn add(&mut self, c: Complex<R>) {
        self.mass += cabs(&c);
        self.value = self.value.clone() + c;
    }

    /// Final coefficient; with `chop` a float sum far below its summands is zero.
    pub fn settle(self, chop: bool) -> Complex<R> {
        if R::EXACT {
            return self.value;
        }
        let size = cabs(&self.value);
        if size < ABS_FLOOR || (chop && size <= CANCELLATION_REL * self.mass) {
            Complex::zero()
        } else {
            self.value
        }
    }
}

pub(crate) fn trim<R: Real>(mut p: Vec<Complex<R>>) -> Vec<Complex<R>> {
    while p.last().is_some_and(is_zero_coeff) {
        p.pop();
    }
    p
}

pub(crate) fn max_abs<R: Real>(p: &[Complex<R>]) -> f64 {
    p.iter().map(cabs).fold(0.0, f64::max)
}

/// `p · (1 - u²)^k`.
pub(crate) fn mul_one_minus_u2<R: Real>(p: &[Complex<R>], k: usize) -> Vec<Complex<R>> {
    let mut out = p.to_vec();
    for _ in 0..k {
        let mut next = vec![Complex::zero(); out.len() + 2];
        for (j, c) in out.iter().enumerate() {
            next[j] = next[j].clone() + c.clone();
            next[j + 2] = next[j + 2].clone() - c.clone();
        }
        out = next;
    }
    out
}

/// Divide by `(1 - u²)`, returning quotient and remainder (degree < 2).
pub(crate) fn div_one_minus_u2<R: Real>(p: &[Complex<R>]) -> (Vec<Complex<R>>, Vec<Complex<R>>) {
    let mut rem = p.to_vec();
    if rem.len() < 3 {
        return (Vec::new(), rem);
    }
    let mut quot = vec![Complex::zero(); rem.len() - 2];
    for j in (2..rem.len()).rev() {
        // leading term c u^j = -c u^{j-2} (1 - u²) + c u^{j-2}
        let c = rem[j].clone();
        quot[j - 2] = -c.clone();
        rem[j - 2] = rem[j - 2].clone() + c;
        rem[j] = Complex::zero();
    }
    rem.truncate(2);
    (quot, rem)
}

/// Evaluate at a real point with f64 arithmetic.
pub(crate) fn eval_f64<R: Real>(p: &[Complex<R>], x: f64) -> crate::scalar::C64 {
    p.iter()
        .rev()
        .fold(crate::scalar::C64::zero(), |acc, c| acc * x + crate::scalar::to_c64(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cint;

    #[test]
    fn division_by_one_minus_u2_roundtrips() {
        let p: Vec<Complex<f64>> = vec![cint(3), cint(-1), cint(2), cint(5)];
        let prod = mul_one_minus_u2(&p, 1);
        let (q, r) = div_one_minus_u2(&prod);
        assert!(r.iter().all(|c| c.norm() < 1e-15));
        assert_eq!(q, p);
    }

    #[test]
    fn accum_chops_cancellation_only_in_float_mode() {
        let mut a = Accum::<f64>::zero();
        a.add(cint(1));
        a.add(Complex::new(-1.0 + 1e-16, 0.0));
        assert!(a.settle(true).is_zero());
    }
}
