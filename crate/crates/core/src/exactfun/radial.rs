use std::collections::BTreeMap;

use num_complex::Complex;
use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{self, Accum};
use super::FunctionError;
use crate::scalar::{cabs, creal, is_zero_coeff, to_c64, Real, C64};

/// Relative tolerance used when deciding whether two exponent factors agree.
const EXPONENT_REL: f64 = 1e-12;

/// `f(r) = r^s (Σ_k c_k r^k) e^{αr + βr²}` on `r > 0`.
///
/// Always held in canonical form: `c_0` and `c_d` are nonzero, or the
/// function is the zero function with `s = 0`, no coefficients and
/// vanishing exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct RadialFunction<R: Real = f64> {
    s: Rational64,
    coeffs: Vec<Complex<R>>,
    alpha: R,
    beta: R,
}

impl<R: Real> RadialFunction<R> {
    pub fn new(s: impl Into<Rational64>, coeffs: Vec<Complex<R>>, alpha: R, beta: R) -> Self {
        let mut f = Self { s: s.into(), coeffs, alpha, beta };
        f.canonicalize();
        f
    }

    pub fn zero() -> Self {
        Self { s: Rational64::zero(), coeffs: Vec::new(), alpha: R::zero(), beta: R::zero() }
    }

    /// `c r^s e^{αr + βr²}`.
    pub fn monomial(s: impl Into<Rational64>, c: Complex<R>, alpha: R, beta: R) -> Self {
        Self::new(s, vec![c], alpha, beta)
    }

    /// Polynomial with real coefficients times the exponential factor.
    pub fn from_real_poly(coeffs: &[R], alpha: R, beta: R) -> Self {
        Self::new(0, coeffs.iter().cloned().map(creal).collect(), alpha, beta)
    }

    pub fn s(&self) -> Rational64 {
        self.s
    }

    pub fn coeffs(&self) -> &[Complex<R>] {
        &self.coeffs
    }

    pub fn alpha(&self) -> &R {
        &self.alpha
    }

    pub fn beta(&self) -> &R {
        &self.beta
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial part, `None` for the zero function.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `r^power · e^{...}`, zero if absent.
    pub fn coeff_at(&self, power: Rational64) -> Complex<R> {
        let off = power - self.s;
        if !off.is_integer() || off < Rational64::zero() {
            return Complex::zero();
        }
        self.coeffs.get(off.to_integer() as usize).cloned().unwrap_or_else(Complex::zero)
    }

    fn canonicalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !is_zero_coeff(c));
        match lead {
            None => *self = Self::zero(),
            Some(i) => {
                self.coeffs.drain(..i);
                self.s += Rational64::from_integer(i as i64);
                let coeffs = std::mem::take(&mut self.coeffs);
                self.coeffs = poly::trim(coeffs);
            }
        }
    }

    /// Exact `∂_r f`.
    pub fn derivative(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut sum = RadialSum::new();
        let two_beta = R::from_i64(2) * self.beta.clone();
        let base = self.s - 1;
        sum.base = Some((base, self.alpha.clone(), self.beta.clone()));
        for (k, c) in self.coeffs.iter().enumerate() {
            let k = k as i64;
            let power = R::from_rational(self.s + k);
            sum.push(k, c.clone() * power);
            sum.push(k + 1, c.clone() * self.alpha.clone());
            sum.push(k + 2, c.clone() * two_beta.clone());
        }
        sum.finish()
    }

    /// `r^p f`.
    pub fn mul_pow(&self, p: i64) -> Self {
        self.mul_pow_rational(Rational64::from_integer(p))
    }

    pub fn mul_pow_rational(&self, p: Rational64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { s: self.s + p, ..self.clone() }
    }

    pub fn scale(&self, c: &Complex<R>) -> Self {
        Self::new(
            self.s,
            self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
            self.alpha.clone(),
            self.beta.clone(),
        )
    }

    pub fn scale_real(&self, x: R) -> Self {
        self.scale(&creal(x))
    }

    pub fn conj(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c.conj()).collect(), ..self.clone() }
    }

    /// `r ↦ f(λr)` with the `λ^{s+k}` factors folded into the coefficients.
    pub fn scale_arg(&self, lambda: &R) -> Result<Self, FunctionError> {
        if !lambda.is_positive() {
            return Err(FunctionError::NonPositiveScale);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (k, c) in self.coeffs.iter().enumerate() {
            let factor = lambda
                .pow_rational(self.s + k as i64)
                .ok_or_else(|| FunctionError::Inexact(format!("{lambda:?}^{}", self.s + k as i64)))?;
            coeffs.push(c.clone() * factor);
        }
        Ok(Self::new(
            self.s,
            coeffs,
            lambda.clone() * self.alpha.clone(),
            lambda.clone() * lambda.clone() * self.beta.clone(),
        ))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FunctionError> {
        let mut sum = RadialSum::new();
        sum.add(Complex::one(), 0, self)?;
        sum.add(Complex::one(), 0, other)?;
        Ok(sum.finish())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FunctionError> {
        let mut sum = RadialSum::new();
        sum.add(Complex::one(), 0, self)?;
        sum.add(-Complex::<R>::one(), 0, other)?;
        Ok(sum.finish())
    }

    /// Relative coefficient distance `max|f - g| / max(max|f|, max|g|)`.
    /// Incompatible exponent factors give infinity.
    pub fn residual(&self, other: &Self) -> f64 {
        let scale = poly::max_abs(&self.coeffs).max(poly::max_abs(&other.coeffs));
        if scale == 0.0 {
            return 0.0;
        }
        let mut sum = RadialSum::without_chop();
        if sum.add(Complex::one(), 0, self).is_err()
            || sum.add(-Complex::<R>::one(), 0, other).is_err()
        {
            return f64::INFINITY;
        }
        poly::max_abs(&sum.finish().coeffs) / scale
    }

    /// `c` with `self = c · g` to relative tolerance `tol`, if one exists.
    /// Exact fields ignore `tol` and demand equality.
    pub fn proportional(&self, g: &Self, tol: f64) -> Option<Complex<R>> {
        if self.is_zero() {
            return Some(Complex::zero());
        }
        if g.is_zero() {
            return None;
        }
        let (k, _) = g
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (k, cabs(c)))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        let target = self.coeff_at(g.s + k as i64);
        let ratio = target / g.coeffs[k].clone();
        let r = self.residual(&g.scale(&ratio));
        let ok = if R::EXACT { r == 0.0 } else { r <= tol };
        ok.then_some(ratio)
    }

    /// True when the exponent factor decays and the integrand is
    /// integrable at the origin under the `r² dr` measure.
    pub fn is_normalizable(&self) -> bool {
        self.is_zero() || self.divergence().is_none()
    }

    fn divergence(&self) -> Option<String> {
        let beta = self.beta.to_f64();
        let alpha = self.alpha.to_f64();
        if beta > 0.0 || (beta == 0.0 && alpha >= 0.0) {
            return Some(format!("exponent factor does not decay (alpha={alpha}, beta={beta})"));
        }
        if self.s * 2 + 2 <= Rational64::from_integer(-1) {
            return Some(format!("r^{} is not square integrable at the origin", self.s));
        }
        None
    }

    /// `∫₀^∞ |f|² r² dr`.
    pub fn norm_sq(&self) -> Result<f64, FunctionError> {
        if self.is_zero() {
            return Ok(0.0);
        }
        if let Some(why) = self.divergence() {
            return Err(FunctionError::Divergent(why));
        }
        let c: Vec<C64> = self.coeffs.iter().map(to_c64).collect();
        let alpha = self.alpha.to_f64();
        let beta = self.beta.to_f64();
        let s = *self.s.numer() as f64 / *self.s.denom() as f64;
        let moment = |n: f64| -> f64 {
            if beta == 0.0 {
                let rate = -2.0 * alpha;
                (statrs::function::gamma::ln_gamma(n + 1.0) - (n + 1.0) * rate.ln()).exp()
            } else if alpha == 0.0 {
                let rate = -2.0 * beta;
                let h = (n + 1.0) / 2.0;
                0.5 * (statrs::function::gamma::ln_gamma(h) - h * rate.ln()).exp()
            } else {
                quadrature_moment(n, 2.0 * alpha, 2.0 * beta)
            }
        };
        let mut total = 0.0;
        for (j, cj) in c.iter().enumerate() {
            for (k, ck) in c.iter().enumerate() {
                let w = (cj * ck.conj()).re;
                if w != 0.0 {
                    total += w * moment(2.0 * s + 2.0 + (j + k) as f64);
                }
            }
        }
        Ok(total)
    }

    pub fn eval(&self, r: f64) -> C64 {
        if self.is_zero() {
            return C64::zero();
        }
        let s = *self.s.numer() as f64 / *self.s.denom() as f64;
        let e = self.alpha.to_f64() * r + self.beta.to_f64() * r * r;
        poly::eval_f64(&self.coeffs, r) * r.powf(s) * e.exp()
    }

    pub fn to_f64(&self) -> RadialFunction<f64> {
        RadialFunction::new(
            self.s,
            self.coeffs.iter().map(to_c64).collect(),
            self.alpha.to_f64(),
            self.beta.to_f64(),
        )
    }
}

/// `∫₀^∞ r^n e^{ar + br²} dr` by adaptive Simpson on a truncated range.
fn quadrature_moment(n: f64, a: f64, b: f64) -> f64 {
    let log_f = |r: f64| n * r.ln() + a * r + b * r * r;
    let mut peak = f64::NEG_INFINITY;
    let mut upper = 1e-3;
    loop {
        peak = peak.max(log_f(upper));
        if upper > 1.0 && log_f(upper) < peak - 80.0 {
            break;
        }
        upper *= 1.25;
    }
    let f = |r: f64| if r <= 0.0 { 0.0 } else { log_f(r).exp() };
    // split so the adaptive rule sees the peak
    let pieces = 64;
    let h = upper / pieces as f64;
    (0..pieces)
        .map(|i| {
            let (lo, hi) = (i as f64 * h, (i + 1) as f64 * h);
            adaptive_simpson(&f, lo, hi, f(lo), f(0.5 * (lo + hi)), f(hi), 1e-15, 40)
        })
        .sum()
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol.max(1e-15 * (left + right).abs()) {
        left + right + delta / 15.0
    } else {
        adaptive_simpson(f, a, m, fa, flm, fm, tol / 2.0, depth - 1)
            + adaptive_simpson(f, m, b, fm, frm, fb, tol / 2.0, depth - 1)
    }
}

/// Linear combination builder `Σ c_i r^{p_i} f_i` over summands sharing one
/// exponent factor.
#[derive(Clone, Debug)]
pub struct RadialSum<R: Real = f64> {
    base: Option<(Rational64, R, R)>,
    terms: BTreeMap<i64, Accum<R>>,
    chop: bool,
}

impl<R: Real> Default for RadialSum<R> {
    fn default() -> Self {
        Self::new()
    }
}

impl<R: Real> RadialSum<R> {
    pub fn new() -> Self {
        Self { base: None, terms: BTreeMap::new(), chop: true }
    }

    /// Accumulator that never treats float cancellation as zero.
    pub fn without_chop() -> Self {
        Self { chop: false, ..Self::new() }
    }

    fn push(&mut self, offset: i64, c: Complex<R>) {
        self.terms.entry(offset).or_insert_with(Accum::zero).add(c);
    }

    /// Adds `c · r^p · f`.
    pub fn add(&mut self, c: Complex<R>, p: i64, f: &RadialFunction<R>) -> Result<&mut Self, FunctionError> {
        if f.is_zero() || (R::EXACT && c.is_zero()) {
            return Ok(self);
        }
        let start = f.s + p;
        let offset = match &self.base {
            None => {
                self.base = Some((start, f.alpha.clone(), f.beta.clone()));
                0
            }
            Some((s0, alpha, beta)) => {
                if !alpha.close_to(&f.alpha, EXPONENT_REL) || !beta.close_to(&f.beta, EXPONENT_REL) {
                    return Err(FunctionError::ExponentMismatch);
                }
                let off = start - s0;
                if !off.is_integer() {
                    return Err(FunctionError::NonIntegerOffset(off.to_string()));
                }
                off.to_integer()
            }
        };
        for (k, fk) in f.coeffs.iter().enumerate() {
            self.push(offset + k as i64, c.clone() * fk.clone());
        }
        Ok(self)
    }

    pub fn finish(self) -> RadialFunction<R> {
        let Some((s0, alpha, beta)) = self.base else {
            return RadialFunction::zero();
        };
        let chop = self.chop;
        let settled: Vec<(i64, Complex<R>)> =
            self.terms.into_iter().map(|(k, a)| (k, a.settle(chop))).collect();
        let Some(lo) = settled.iter().find(|(_, c)| !is_zero_coeff(c)).map(|(k, _)| *k) else {
            return RadialFunction::zero();
        };
        let hi = settled.last().map(|(k, _)| *k).unwrap_or(lo);
        let mut coeffs = vec![Complex::zero(); (hi - lo + 1) as usize];
        for (k, c) in settled {
            if k >= lo {
                coeffs[(k - lo) as usize] = c;
            }
        }
        RadialFunction::new(s0 + lo, coeffs, alpha, beta)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PowerJson {
    Int(i64),
    Ratio(String),
}

#[derive(Serialize, Deserialize)]
struct RadialJson {
    s: PowerJson,
    coeffs: Vec<[f64; 2]>,
    alpha: f64,
    beta: f64,
}

impl Serialize for RadialFunction<f64> {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let s = if self.s.is_integer() {
            PowerJson::Int(self.s.to_integer())
        } else {
            PowerJson::Ratio(self.s.to_string())
        };
        RadialJson {
            s,
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
            alpha: self.alpha,
            beta: self.beta,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for RadialFunction<f64> {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = RadialJson::deserialize(de)?;
        let s = match raw.s {
            PowerJson::Int(v) => Rational64::from_integer(v),
            PowerJson::Ratio(text) => text.parse::<Rational64>().map_err(serde::de::Error::custom)?,
        };
        Ok(Self::new(s, raw.coeffs.into_iter().map(|[re, im]| C64::new(re, im)).collect(), raw.alpha, raw.beta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cint, Exact};

    fn rf(s: i64, c: &[f64], alpha: f64, beta: f64) -> RadialFunction {
        RadialFunction::from_real_poly(c, alpha, beta).mul_pow(s)
    }

    #[test]
    fn derivative_examples() {
        let g = rf(0, &[1.0], 0.0, -0.25);
        assert_eq!(g.derivative(), rf(1, &[-0.5], 0.0, -0.25));
        assert_eq!(rf(1, &[1.0], 0.0, 0.0).derivative(), rf(0, &[1.0], 0.0, 0.0));
        assert_eq!(rf(1, &[1.0], -1.0, 0.0).derivative(), rf(0, &[1.0, -1.0], -1.0, 0.0));
    }

    #[test]
    fn mul_pow_examples() {
        assert_eq!(rf(1, &[1.0], -1.0, 0.0).mul_pow(-1), rf(0, &[1.0], -1.0, 0.0));
        assert_eq!(rf(0, &[1.0], 0.0, 0.0).mul_pow(2).s(), Rational64::from_integer(2));
        assert_eq!(rf(2, &[1.0], 0.0, 0.0).mul_pow(-3).s(), Rational64::from_integer(-1));
    }

    #[test]
    fn scale_arg_examples() {
        assert_eq!(rf(1, &[1.0], -1.0, 0.0).scale_arg(&2.0).unwrap(), rf(1, &[2.0], -2.0, 0.0));
        assert_eq!(rf(0, &[1.0], 0.0, 0.0).scale_arg(&7.0).unwrap(), rf(0, &[1.0], 0.0, 0.0));
        assert_eq!(rf(2, &[1.0], 0.0, -1.0).scale_arg(&3.0).unwrap(), rf(2, &[9.0], 0.0, -9.0));
        assert!(rf(0, &[1.0], 0.0, 0.0).scale_arg(&-1.0).is_err());
    }

    #[test]
    fn proportional_examples() {
        let g = rf(1, &[1.0], -1.0, 0.0);
        assert_eq!(rf(1, &[2.0], -1.0, 0.0).proportional(&g, 1e-12), Some(cint(2)));
        assert_eq!(g.proportional(&rf(1, &[1.0], -2.0, 0.0), 1e-12), None);
        assert_eq!(RadialFunction::zero().proportional(&rf(1, &[1.0], 0.0, 0.0), 1e-12), Some(cint(0)));
    }

    #[test]
    fn norm_examples() {
        assert!((rf(0, &[1.0], -0.5, 0.0).norm_sq().unwrap() - 2.0).abs() < 1e-13);
        let pi = std::f64::consts::PI;
        assert!((rf(0, &[1.0], 0.0, -0.5).norm_sq().unwrap() - pi.sqrt() / 4.0).abs() < 1e-13);
        assert!(matches!(rf(0, &[1.0], 1.0, 0.0).norm_sq(), Err(FunctionError::Divergent(_))));
    }

    #[test]
    fn mixed_exponent_norm_uses_quadrature() {
        // ∫ r² e^{-2r - r²} dr, reference from the error-function closed form
        let f = rf(0, &[1.0], -1.0, -0.5);
        let pi = std::f64::consts::PI;
        let erfc1 = 0.157_299_207_050_285_13;
        let reference = 0.75 * pi.sqrt() * std::f64::consts::E * erfc1 - 0.5;
        let direct = f.norm_sq().unwrap();
        assert!((direct - reference).abs() < 1e-10 * reference, "{direct} vs {reference}");
    }

    #[test]
    fn sums_require_matching_exponents() {
        let a = rf(0, &[1.0], -1.0, 0.0);
        let b = rf(0, &[1.0], -2.0, 0.0);
        assert_eq!(a.try_add(&b), Err(FunctionError::ExponentMismatch));
        let half = RadialFunction::<f64>::new(Rational64::new(1, 2), vec![cint(1)], -1.0, 0.0);
        assert!(matches!(a.try_add(&half), Err(FunctionError::NonIntegerOffset(_))));
        assert!(a.try_sub(&a).unwrap().is_zero());
    }

    #[test]
    fn exact_dilation_is_exact() {
        let f = RadialFunction::<Exact>::new(
            2,
            vec![cint(3), cint(-1)],
            Exact::from_ratio(-1, 4),
            Exact::from_i64(0),
        );
        let back = f
            .scale_arg(&Exact::from_ratio(3, 2))
            .unwrap()
            .scale_arg(&Exact::from_ratio(2, 3))
            .unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn json_roundtrip() {
        let f = RadialFunction::<f64>::new(Rational64::new(-1, 2), vec![C64::new(1.0, 2.0)], -0.5, 0.0);
        let text = serde_json::to_string(&f).unwrap();
        assert!(text.contains("\"s\":\"-1/2\""));
        let back: RadialFunction = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
    }
}
