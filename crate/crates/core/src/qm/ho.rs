//! Radial isotropic oscillator, `V = (ω²/4) r²`.
//!
//! First-order factors (operator index as written):
//! * `â⁺_ℓ = -∂_r + (ℓ-1)/r + (ω/2)r`, `â⁻_ℓ = ∂_r + (ℓ+1)/r + (ω/2)r`
//! * `b̂⁺_ℓ = -∂_r + (ℓ-1)/r - (ω/2)r`, `b̂⁻_ℓ = ∂_r + (ℓ+1)/r - (ω/2)r`
//!
//! so that `Ĥ_ℓ = â⁺_ℓ â⁻_ℓ - (ω/2)(2ℓ-1) = b̂⁻_{ℓ+1} b̂⁺_{ℓ+1} + (ω/2)(2ℓ+3)`.
//!
//! Compositions take the ℓ of the function they act on:
//! * `shift_r(+)` is `Δ⁺ = b̂⁺_{ℓ+2} â⁺_{ℓ+1}` (`ℓ → ℓ+2`), `shift_r(-)` is
//!   `Δ⁻ = b̂⁻_{ℓ-1} â⁻_ℓ` (`ℓ → ℓ-2`);
//! * `ladder_r(+)` is `Λ⁺ = b̂⁻_{ℓ+1} â⁺_{ℓ+1}` (`n → n+2`), `ladder_r(-)` is
//!   `Λ⁻ = b̂⁺_ℓ â⁻_ℓ` (`n → n-2`).

use num_complex::Complex;

use super::angular::{angular_symmetry, ladder_theta, seed_pair};
use super::{check_labels, radial_combo, QmError, SeparatedState};
use crate::exactfun::RadialFunction;
use crate::scalar::{cint, creal, Real, Sign};

#[derive(Clone, Debug, PartialEq)]
pub struct HoParams<R: Real = f64> {
    pub omega: R,
}

impl<R: Real> HoParams<R> {
    pub fn new(omega: R) -> Result<Self, QmError> {
        if !omega.is_positive() {
            return Err(QmError::Parameter("omega must be positive".into()));
        }
        Ok(Self { omega })
    }

    fn half_omega(&self) -> R {
        self.omega.clone() / R::from_i64(2)
    }
}

/// `Ĥ_ℓ = -∂²_r - (2/r)∂_r + ℓ(ℓ+1)/r² + (ω²/4)r²`.
pub fn apply_hl<R: Real>(f: &RadialFunction<R>, ell: i64, p: &HoParams<R>) -> RadialFunction<R> {
    let w2 = p.omega.clone() * p.omega.clone() / R::from_i64(4);
    radial_combo(f, &[(2, 0, cint(-1)), (1, -1, cint(-2)), (0, -2, cint(ell * (ell + 1))), (0, 2, creal(w2))])
}

pub fn apply_a<R: Real>(f: &RadialFunction<R>, ell: i64, p: &HoParams<R>, sign: Sign) -> RadialFunction<R> {
    first_order(f, ell, p.half_omega(), sign)
}

pub fn apply_b<R: Real>(f: &RadialFunction<R>, ell: i64, p: &HoParams<R>, sign: Sign) -> RadialFunction<R> {
    first_order(f, ell, -p.half_omega(), sign)
}

fn first_order<R: Real>(f: &RadialFunction<R>, ell: i64, linear: R, sign: Sign) -> RadialFunction<R> {
    let (d, inv) = match sign {
        Sign::Plus => (-1, ell - 1),
        Sign::Minus => (1, ell + 1),
    };
    radial_combo(f, &[(1, 0, cint(d)), (0, -1, cint(inv)), (0, 1, creal(linear))])
}

/// `Δ±`: ℓ-shift by two at fixed energy.
pub fn shift_r<R: Real>(f: &RadialFunction<R>, ell: i64, p: &HoParams<R>, sign: Sign) -> RadialFunction<R> {
    match sign {
        Sign::Plus => apply_b(&apply_a(f, ell + 1, p, Sign::Plus), ell + 2, p, Sign::Plus),
        Sign::Minus => apply_b(&apply_a(f, ell, p, Sign::Minus), ell - 1, p, Sign::Minus),
    }
}

/// `Λ±`: energy ladder `n → n ± 2` at fixed ℓ.
pub fn ladder_r<R: Real>(f: &RadialFunction<R>, ell: i64, p: &HoParams<R>, sign: Sign) -> RadialFunction<R> {
    match sign {
        Sign::Plus => apply_b(&apply_a(f, ell + 1, p, Sign::Plus), ell + 1, p, Sign::Minus),
        Sign::Minus => apply_b(&apply_a(f, ell, p, Sign::Minus), ell, p, Sign::Plus),
    }
}

/// `E_n = (ω/2)(2n + 3)`.
pub fn energy<R: Real>(n: i64, p: &HoParams<R>) -> R {
    p.half_omega() * R::from_i64(2 * n + 3)
}

/// Lowest radial state of the given parity sector, `r^{ℓ0} e^{-ωr²/4}`.
pub fn seed_radial<R: Real>(ell0: i64, p: &HoParams<R>) -> RadialFunction<R> {
    RadialFunction::monomial(ell0, cint(1), R::zero(), -p.omega.clone() / R::from_i64(4))
}

/// `Ŝ± = Δ± λ±λ±`: `ℓ → ℓ ± 2` at fixed `(n, m)`.
pub fn symmetry_s<R: Real>(state: &SeparatedState<R>, p: &HoParams<R>, sign: Sign) -> SeparatedState<R> {
    let ell = state.ell;
    let target = ell + 2 * sign.factor();
    let angular = match sign {
        Sign::Plus => ladder_theta(&ladder_theta(&state.angular, ell + 1, sign), ell + 2, sign),
        Sign::Minus => ladder_theta(&ladder_theta(&state.angular, ell, sign), ell - 1, sign),
    };
    if angular.is_zero() || state.radial.is_zero() {
        return SeparatedState::zero(state.n, target, state.m);
    }
    let radial = shift_r(&state.radial, ell, p, sign);
    SeparatedState { radial, angular, azimuthal: state.azimuthal, n: state.n, ell: target, m: state.m }
}

/// Generates `Ψ_{n,ℓ,m}` from the even (`ℓ=0`) or odd (`ℓ=1`) seed by
/// `Λ⁺` steps, then `Ŝ⁺` steps, then `(L̂⁺)^{|m|}`. Float fields return
/// unit-norm states.
pub fn build_state<R: Real>(n: i64, ell: i64, m: i64, p: &HoParams<R>) -> Result<SeparatedState<R>, QmError> {
    check_labels(n, ell, m)?;
    if (n - ell) % 2 != 0 {
        return Err(QmError::InvalidLabels(format!("n - l must be even, got n={n} l={ell}")));
    }
    let ell0 = ell % 2;
    let mut pair = seed_pair::<R>();
    if ell0 == 1 {
        pair.theta = ladder_theta(&pair.theta, 1, Sign::Plus);
        pair.ell = 1;
    }
    let mut radial = seed_radial(ell0, p);
    for _ in 0..(n - ell0) / 2 {
        radial = ladder_r(&radial, ell0, p, Sign::Plus);
    }
    let mut state = SeparatedState {
        radial,
        angular: pair.theta,
        azimuthal: pair.mode,
        n,
        ell: ell0,
        m: 0,
    };
    for _ in 0..(ell - ell0) / 2 {
        state = symmetry_s(&state, p, Sign::Plus);
    }
    let mut pair = state.pair();
    for _ in 0..m.abs() {
        pair = angular_symmetry(&pair, Sign::Plus)?;
    }
    if m < 0 {
        pair.theta = pair.theta.conj();
        pair.mode.m = m;
        pair.m = m;
    }
    Ok(normalized(state.with_pair(pair)))
}

pub(crate) fn normalized<R: Real>(mut s: SeparatedState<R>) -> SeparatedState<R> {
    if s.is_zero() {
        return s;
    }
    let rn = s.radial.norm_sq().unwrap_or(f64::NAN);
    let an = 2.0 * std::f64::consts::PI * s.angular.norm_sq();
    if let (Some(a), Some(b)) = (R::from_f64(1.0 / rn.sqrt()), R::from_f64(1.0 / an.sqrt())) {
        s.radial = s.radial.scale(&Complex::new(a, R::zero()));
        s.angular = s.angular.scale(&Complex::new(b, R::zero()));
    }
    s
}

/// `|Ĥ_ℓ R - E_n R|` relative to `R`.
pub fn eigen_residual<R: Real>(state: &SeparatedState<R>, p: &HoParams<R>) -> f64 {
    let lhs = apply_hl(&state.radial, state.ell, p);
    lhs.residual(&state.radial.scale(&creal(energy(state.n, p))))
}
