//! Angular sector: `L_z` ladder, θ shift and ladder operators, `Ĉ_ℓ`,
//! the angular symmetries `L̂±` and generated spherical harmonics.
//!
//! Index conventions:
//! * `d⁻_{θ,m} = -∂_θ - m cotθ` maps `P_ℓ^m → P_ℓ^{m-1}`.
//! * `d⁺_{θ,m} = ∂_θ - (m-1) cotθ` maps `P_ℓ^{m-1} → P_ℓ^m`.
//! * `λ±_ℓ = ±sinθ ∂_θ + ℓ cosθ`; `λ⁻_ℓ` lowers `P_ℓ^m` and `λ⁺_{ℓ+1}` raises it.

use num_complex::Complex;
use num_traits::One;
use serde::Serialize;

use super::{angular_combo, QmError};
use crate::exactfun::{AngularFunction, AzimuthalMode, FunctionError};
use crate::scalar::{cint, Real, Sign};

/// `P_ℓ^m(θ) e^{imφ}` with its labels.
#[derive(Clone, Debug, PartialEq)]
pub struct AngularPair<R: Real = f64> {
    pub theta: AngularFunction<R>,
    pub mode: AzimuthalMode,
    pub ell: i64,
    pub m: i64,
}

impl<R: Real> AngularPair<R> {
    pub fn is_zero(&self) -> bool {
        self.theta.is_zero()
    }

    /// `∫|Φ|² sinθ dθ dφ`.
    pub fn norm_sq(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.theta.norm_sq()
    }
}

impl Serialize for AngularPair<f64> {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = ser.serialize_struct("AngularPair", 4)?;
        st.serialize_field("ell", &self.ell)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("theta", &self.theta)?;
        st.serialize_field("mode", &self.mode)?;
        st.end()
    }
}

pub fn apply_lz(mode: AzimuthalMode) -> (i64, AzimuthalMode) {
    (mode.m, mode)
}

/// `e^{±iφ}`.
pub fn ladder_phi(mode: AzimuthalMode, sign: Sign) -> AzimuthalMode {
    AzimuthalMode::new(mode.m + sign.factor())
}

/// `d±_{θ,m}` (see the module conventions).
pub fn shift_theta<R: Real>(g: &AngularFunction<R>, m: i64, sign: Sign) -> Result<AngularFunction<R>, FunctionError> {
    match sign {
        Sign::Minus => angular_combo(g, &[(1, 0, 0, cint(-1)), (0, -1, 1, cint(-m))]),
        Sign::Plus => angular_combo(g, &[(1, 0, 0, cint(1)), (0, -1, 1, cint(-(m - 1)))]),
    }
}

/// `λ±_ℓ = ±sinθ ∂_θ + ℓ cosθ`.
pub fn ladder_theta<R: Real>(g: &AngularFunction<R>, ell: i64, sign: Sign) -> AngularFunction<R> {
    angular_combo(g, &[(1, 1, 0, cint(sign.factor())), (0, 0, 1, cint(ell))])
        .expect("non-negative sin powers stay in the class")
}

/// `Ĉ_ℓ = -sin²θ ∂²_θ - sinθ cosθ ∂_θ - ℓ(ℓ+1) sin²θ`.
pub fn apply_cl<R: Real>(g: &AngularFunction<R>, ell: i64) -> AngularFunction<R> {
    angular_combo(g, &[(2, 2, 0, cint(-1)), (1, 1, 1, cint(-1)), (0, 2, 0, cint(-ell * (ell + 1)))])
        .expect("non-negative sin powers stay in the class")
}

/// `L̂²_m = -∂²_θ - cotθ ∂_θ + m²/sin²θ`.
pub fn apply_l2m<R: Real>(g: &AngularFunction<R>, m: i64) -> Result<AngularFunction<R>, FunctionError> {
    angular_combo(g, &[(2, 0, 0, cint(-1)), (1, -1, 1, cint(-1)), (0, -2, 0, cint(m * m))])
}

/// `L̂± = d±_θ e^{±iφ}`: `m → m ± 1` at fixed ℓ, zero at the boundary.
pub fn angular_symmetry<R: Real>(p: &AngularPair<R>, sign: Sign) -> Result<AngularPair<R>, QmError> {
    let theta = match sign {
        Sign::Plus => shift_theta(&p.theta, p.m + 1, Sign::Plus)?,
        Sign::Minus => shift_theta(&p.theta, p.m, Sign::Minus)?,
    };
    Ok(AngularPair { theta, mode: ladder_phi(p.mode, sign), ell: p.ell, m: p.m + sign.factor() })
}

/// `Y_ℓ^m ∝ (L̂⁺)^m λ⁺_ℓ ⋯ λ⁺_1 · 1`; negative `m` is the conjugate of
/// `Y_ℓ^{|m|}` carried by the mode `-|m|`. Normalization applies only in
/// float fields.
pub fn spherical_harmonic<R: Real>(ell: i64, m: i64, normalize: bool) -> Result<AngularPair<R>, QmError> {
    if ell < 0 || m.abs() > ell {
        return Err(QmError::InvalidLabels(format!("need l >= |m|, got l={ell} m={m}")));
    }
    let mut pair = AngularPair { theta: AngularFunction::one(), mode: AzimuthalMode::new(0), ell: 0, m: 0 };
    for i in 1..=ell {
        pair.theta = ladder_theta(&pair.theta, i, Sign::Plus);
        pair.ell = i;
    }
    for _ in 0..m.abs() {
        pair = angular_symmetry(&pair, Sign::Plus)?;
    }
    if m < 0 {
        pair = AngularPair { theta: pair.theta.conj(), mode: AzimuthalMode::new(m), ell, m };
    }
    if normalize {
        if let Some(scale) = R::from_f64(1.0 / pair.norm_sq().sqrt()) {
            pair.theta = pair.theta.scale(&Complex::new(scale, R::zero()));
        }
    }
    Ok(pair)
}

/// `L̂²_m` eigenvalue residual `|L̂²Y - ℓ(ℓ+1)Y|` relative to `Y`.
pub fn eigen_residual<R: Real>(p: &AngularPair<R>) -> Result<f64, FunctionError> {
    let lhs = apply_l2m(&p.theta, p.m)?;
    Ok(lhs.residual(&p.theta.scale(&cint(p.ell * (p.ell + 1)))))
}

/// The constant function as the `(0, 0)` pair.
pub fn seed_pair<R: Real>() -> AngularPair<R> {
    AngularPair { theta: AngularFunction::constant(Complex::one()), mode: AzimuthalMode::new(0), ell: 0, m: 0 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn af(a: u32, q: &[f64]) -> AngularFunction {
        AngularFunction::from_real_poly(a, q)
    }

    #[test]
    fn lz_and_phi_ladder() {
        assert_eq!(apply_lz(AzimuthalMode::new(3)).0, 3);
        assert_eq!(apply_lz(AzimuthalMode::new(-2)).0, -2);
        assert_eq!(ladder_phi(AzimuthalMode::new(5), Sign::Minus).m, 4);
        assert_eq!(ladder_phi(AzimuthalMode::new(-1), Sign::Plus).m, 0);
    }

    #[test]
    fn shift_examples() {
        assert!(shift_theta(&af(0, &[1.0]), 1, Sign::Plus).unwrap().is_zero());
        let raised = shift_theta(&af(0, &[0.0, 1.0]), 1, Sign::Plus).unwrap();
        assert!(raised.proportional(&af(1, &[1.0]), 1e-12).is_some());
        // d⁺_{θ,3} kills P_2^2 ∝ sin²θ
        assert!(shift_theta(&af(2, &[1.0]), 3, Sign::Plus).unwrap().is_zero());
    }

    #[test]
    fn ladder_examples() {
        assert!(ladder_theta(&af(1, &[1.0]), 1, Sign::Minus).is_zero());
        assert_eq!(ladder_theta(&af(0, &[1.0]), 1, Sign::Plus), af(0, &[0.0, 1.0]));
        assert_eq!(ladder_theta(&af(0, &[0.0, 1.0]), 2, Sign::Plus), af(0, &[-1.0, 0.0, 3.0]));
    }

    #[test]
    fn cl_and_l2m_examples() {
        assert!(apply_cl(&af(0, &[1.0]), 0).is_zero());
        assert_eq!(apply_cl(&af(1, &[1.0]), 1), af(1, &[-1.0]));
        assert!(apply_l2m(&af(0, &[1.0]), 0).unwrap().is_zero());
        assert_eq!(apply_l2m(&af(0, &[0.0, 1.0]), 0).unwrap(), af(0, &[0.0, 2.0]));
        assert_eq!(apply_l2m(&af(1, &[1.0]), 1).unwrap(), af(1, &[2.0]));
        assert!(apply_l2m(&af(0, &[1.0]), 1).is_err());
    }

    #[test]
    fn symmetry_boundaries() {
        let p11: AngularPair = spherical_harmonic(1, 1, false).unwrap();
        assert!(angular_symmetry(&p11, Sign::Plus).unwrap().is_zero());
        let p10: AngularPair = spherical_harmonic(1, 0, false).unwrap();
        let up = angular_symmetry(&p10, Sign::Plus).unwrap();
        assert_eq!(up.m, 1);
        assert!(up.theta.proportional(&p11.theta, 1e-12).is_some());
        let p2m2: AngularPair = spherical_harmonic(2, -2, false).unwrap();
        assert!(angular_symmetry(&p2m2, Sign::Minus).unwrap().is_zero());
    }

    #[test]
    fn harmonic_shapes() {
        let y00: AngularPair = spherical_harmonic(0, 0, true).unwrap();
        let c = y00.theta.coeffs()[0].re;
        assert!((c - 1.0 / (4.0 * std::f64::consts::PI).sqrt()).abs() < 1e-15);
        let y22: AngularPair = spherical_harmonic(2, 2, false).unwrap();
        assert!(y22.theta.proportional(&af(2, &[1.0]), 1e-12).is_some());
        assert_eq!(y22.mode.m, 2);
        assert!(spherical_harmonic::<f64>(1, 2, false).is_err());
    }

    #[test]
    fn exact_harmonics_are_eigenfunctions() {
        for ell in 0..=4 {
            for m in -ell..=ell {
                let y: AngularPair<Exact> = spherical_harmonic(ell, m, true).unwrap();
                assert_eq!(eigen_residual(&y).unwrap(), 0.0, "l={ell} m={m}");
            }
        }
    }
}
