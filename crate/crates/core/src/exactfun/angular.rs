use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{self, Accum};
use super::FunctionError;
use crate::scalar::{cabs, creal, to_c64, Real, C64};

/// Remainder allowed when a float polynomial is divided by `1 - cos²θ`.
const DIVISION_REL: f64 = 1e-10;

/// `g(θ) = sin^aθ · q(cosθ)` on `0 < θ < π`.
///
/// Canonical form keeps `a ∈ {0, 1}`: even powers of `sinθ` are folded
/// into `q` through `sin²θ = 1 - cos²θ`.
#[derive(Clone, Debug, PartialEq)]
pub struct AngularFunction<R: Real = f64> {
    a: u32,
    coeffs: Vec<Complex<R>>,
}

impl<R: Real> AngularFunction<R> {
    /// Any non-negative sin power; reduced to canonical parity form.
    pub fn new(a: u32, coeffs: Vec<Complex<R>>) -> Self {
        let expanded = poly::mul_one_minus_u2(&coeffs, (a / 2) as usize);
        let coeffs = poly::trim(expanded);
        if coeffs.is_empty() {
            return Self::zero();
        }
        Self { a: a % 2, coeffs }
    }

    pub fn zero() -> Self {
        Self { a: 0, coeffs: Vec::new() }
    }

    pub fn constant(c: Complex<R>) -> Self {
        Self::new(0, vec![c])
    }

    pub fn one() -> Self {
        Self::constant(Complex::one())
    }

    /// `sin^aθ cos^jθ`.
    pub fn sin_cos(a: u32, j: usize) -> Self {
        let mut q = vec![Complex::zero(); j + 1];
        q[j] = Complex::one();
        Self::new(a, q)
    }

    pub fn from_real_poly(a: u32, q: &[R]) -> Self {
        Self::new(a, q.iter().cloned().map(creal).collect())
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn coeffs(&self) -> &[Complex<R>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Canonical form of `self`; canonical values are fixed points.
    pub fn reduced(&self) -> Self {
        Self::new(self.a, self.coeffs.clone())
    }

    /// Exact `∂_θ g`: `a sin^{a-1} cos q - sin^{a+1} q'`.
    pub fn derivative(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let dq: Vec<Complex<R>> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c.clone() * R::from_i64(j as i64))
            .collect();
        let mut sum = AngularSum::new();
        sum.add(creal(R::from_i64(self.a as i64)), -1, 1, self);
        sum.add_raw(-Complex::<R>::one(), self.a as i64 + 1, 0, dq);
        sum.finish().expect("derivative stays in the closed class")
    }

    /// `c · cotθ · g`; fails when `sinθ` does not divide the result.
    pub fn mul_cotan(&self, c: &Complex<R>) -> Result<Self, FunctionError> {
        let mut sum = AngularSum::new();
        sum.add(c.clone(), -1, 1, self);
        sum.finish()
    }

    /// `sin^kθ · g` for any integer `k`.
    pub fn mul_sin_pow(&self, k: i64) -> Result<Self, FunctionError> {
        let mut sum = AngularSum::new();
        sum.add(Complex::one(), k, 0, self);
        sum.finish()
    }

    pub fn mul_cos(&self) -> Self {
        Self { a: self.a, coeffs: std::iter::once(Complex::zero()).chain(self.coeffs.iter().cloned()).collect() }
            .reduced()
    }

    pub fn scale(&self, c: &Complex<R>) -> Self {
        Self::new(self.a, self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn conj(&self) -> Self {
        Self { a: self.a, coeffs: self.coeffs.iter().map(|c| c.conj()).collect() }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FunctionError> {
        let mut sum = AngularSum::new();
        sum.add(Complex::one(), 0, 0, self);
        sum.add(Complex::one(), 0, 0, other);
        sum.finish()
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FunctionError> {
        let mut sum = AngularSum::new();
        sum.add(Complex::one(), 0, 0, self);
        sum.add(-Complex::<R>::one(), 0, 0, other);
        sum.finish()
    }

    /// Relative canonical-coefficient distance; infinity across parities.
    pub fn residual(&self, other: &Self) -> f64 {
        let scale = poly::max_abs(&self.coeffs).max(poly::max_abs(&other.coeffs));
        if scale == 0.0 {
            return 0.0;
        }
        let mut sum = AngularSum::without_chop();
        sum.add(Complex::one(), 0, 0, self);
        sum.add(-Complex::<R>::one(), 0, 0, other);
        match sum.finish() {
            Ok(d) => poly::max_abs(&d.coeffs) / scale,
            Err(_) => f64::INFINITY,
        }
    }

    /// `c` with `self = c · g`, compared in canonical parity form.
    pub fn proportional(&self, g: &Self, tol: f64) -> Option<Complex<R>> {
        if self.is_zero() {
            return Some(Complex::zero());
        }
        if g.is_zero() || g.a != self.a {
            return None;
        }
        let (k, _) = g
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| (k, cabs(c)))
            .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        let target = self.coeffs.get(k).cloned().unwrap_or_else(Complex::zero);
        let ratio = target / g.coeffs[k].clone();
        let r = self.residual(&g.scale(&ratio));
        let ok = if R::EXACT { r == 0.0 } else { r <= tol };
        ok.then_some(ratio)
    }

    pub fn eval(&self, theta: f64) -> C64 {
        poly::eval_f64(&self.coeffs, theta.cos()) * theta.sin().powi(self.a as i32)
    }

    /// `∫₀^π |g|² sinθ dθ`, evaluated term by term in `u = cosθ`.
    pub fn norm_sq(&self) -> f64 {
        let c: Vec<C64> = self.coeffs.iter().map(to_c64).collect();
        let mut dens = vec![C64::zero(); (2 * c.len()).saturating_sub(1)];
        for (j, cj) in c.iter().enumerate() {
            for (k, ck) in c.iter().enumerate() {
                dens[j + k] += cj * ck.conj();
            }
        }
        let dens = poly::mul_one_minus_u2(&dens, self.a as usize);
        dens.iter()
            .enumerate()
            .filter(|(n, _)| n % 2 == 0)
            .map(|(n, d)| 2.0 * d.re / (n as f64 + 1.0))
            .sum()
    }

    pub fn to_f64(&self) -> AngularFunction<f64> {
        AngularFunction::new(self.a, self.coeffs.iter().map(to_c64).collect())
    }
}

/// Builder for `Σ c_i sin^{k_i}θ cos^{j_i}θ g_i` with integer (possibly
/// negative) sin powers. [`AngularSum::finish`] fails if the total leaves
/// the closed class.
#[derive(Clone, Debug)]
pub struct AngularSum<R: Real = f64> {
    raw: Vec<(i64, Vec<Complex<R>>)>,
    chop: bool,
}

impl<R: Real> Default for AngularSum<R> {
    fn default() -> Self {
        Self::new()
    }
}

impl<R: Real> AngularSum<R> {
    pub fn new() -> Self {
        Self { raw: Vec::new(), chop: true }
    }

    pub fn without_chop() -> Self {
        Self { raw: Vec::new(), chop: false }
    }

    /// Adds `c · sin^{sin_pow}θ · cos^{cos_pow}θ · g`.
    pub fn add(&mut self, c: Complex<R>, sin_pow: i64, cos_pow: usize, g: &AngularFunction<R>) -> &mut Self {
        if g.is_zero() {
            return self;
        }
        self.add_raw(c, sin_pow + g.a as i64, cos_pow, g.coeffs.clone())
    }

    fn add_raw(&mut self, c: Complex<R>, sin_pow: i64, cos_pow: usize, q: Vec<Complex<R>>) -> &mut Self {
        if q.is_empty() || (R::EXACT && c.is_zero()) {
            return self;
        }
        let mut shifted = vec![Complex::zero(); cos_pow];
        shifted.extend(q.into_iter().map(|x| x * c.clone()));
        self.raw.push((sin_pow, shifted));
        self
    }

    pub fn finish(self) -> Result<AngularFunction<R>, FunctionError> {
        let mut parts = Vec::new();
        for parity in [0, 1] {
            let group: Vec<&(i64, Vec<Complex<R>>)> =
                self.raw.iter().filter(|(a, _)| a.rem_euclid(2) == parity).collect();
            if let Some(part) = settle_group(&group, self.chop)? {
                parts.push(part);
            }
        }
        match parts.len() {
            0 => Ok(AngularFunction::zero()),
            1 => Ok(parts.pop().unwrap()),
            _ => Err(FunctionError::NotRepresentable(
                "sum mixes odd and even powers of sinθ".into(),
            )),
        }
    }
}

/// Combine same-parity terms over their lowest sin power, then fold
/// that power into `{0, 1}`.
fn settle_group<R: Real>(
    group: &[&(i64, Vec<Complex<R>>)],
    chop: bool,
) -> Result<Option<AngularFunction<R>>, FunctionError> {
    let Some(a0) = group.iter().map(|(a, _)| *a).min() else {
        return Ok(None);
    };
    let mut acc: Vec<Accum<R>> = Vec::new();
    for (a, q) in group {
        let lifted = poly::mul_one_minus_u2(q, ((a - a0) / 2) as usize);
        if acc.len() < lifted.len() {
            acc.resize_with(lifted.len(), Accum::zero);
        }
        for (slot, c) in acc.iter_mut().zip(lifted) {
            slot.add(c);
        }
    }
    let mut q = poly::trim(acc.into_iter().map(|x| x.settle(chop)).collect());
    if q.is_empty() {
        return Ok(None);
    }
    let mut a = a0;
    while a < 0 {
        let (quot, rem) = poly::div_one_minus_u2(&q);
        let exact = if R::EXACT {
            rem.iter().all(|c| c.is_zero())
        } else {
            poly::max_abs(&rem) <= DIVISION_REL * poly::max_abs(&q)
        };
        if !exact {
            return Err(FunctionError::NotRepresentable(format!(
                "sinθ^{} does not divide the polynomial part",
                -a
            )));
        }
        q = poly::trim(quot);
        a += 2;
    }
    let f = AngularFunction::new(a as u32, q);
    Ok((!f.is_zero()).then_some(f))
}

#[derive(Serialize, Deserialize)]
struct AngularJson {
    a: u32,
    coeffs: Vec<[f64; 2]>,
}

impl Serialize for AngularFunction<f64> {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        AngularJson { a: self.a, coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect() }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for AngularFunction<f64> {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let raw = AngularJson::deserialize(de)?;
        Ok(Self::new(raw.a, raw.coeffs.into_iter().map(|[re, im]| C64::new(re, im)).collect()))
    }
}
