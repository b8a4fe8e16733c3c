//! Radial Kepler-Coulomb problem, `V = -k/r`.
//!
//! ℓ shifts: `d⁺_{r,ℓ+1} = -∂_r + ℓ/r - k/(2(ℓ+1))` raises `R_n^ℓ`,
//! `d⁻_{r,ℓ} = ∂_r + (ℓ+1)/r - k/(2ℓ)` lowers it. Both take the ℓ of the
//! function they act on.
//!
//! Energy ladders use the dilation `D_n f(r) = f((n+1)r/n)`:
//! `Λ⁺_n = (-r∂_r + k r/(2(n+1)) - (n+1)) D_n^{-1}` maps `ψ^{n-1} → ψ^n` and
//! `Λ⁻_n = D_n (r∂_r + k r/(2(n+1)) - n)` maps `ψ^n → ψ^{n-1}`, where `n`
//! labels the upper level. They intertwine `ĥ_n = r²(Ĥ_ℓ - E_n)` with
//! `ĥ_n = Λ⁺_n Λ⁻_n - n(n+1) = Λ⁻_{n+1} Λ⁺_{n+1} - (n+1)(n+2)`.

use super::angular::{angular_symmetry, ladder_theta, seed_pair};
use super::ho::normalized;
use super::{check_labels, radial_combo, QmError, SeparatedState};
use crate::exactfun::RadialFunction;
use crate::scalar::{cint, creal, Real, Sign};

#[derive(Clone, Debug, PartialEq)]
pub struct KcParams<R: Real = f64> {
    pub k: R,
}

impl<R: Real> KcParams<R> {
    pub fn new(k: R) -> Result<Self, QmError> {
        if !k.is_positive() {
            return Err(QmError::Parameter("k must be positive".into()));
        }
        Ok(Self { k })
    }
}

/// `Ĥ_ℓ = -∂²_r - (2/r)∂_r + ℓ(ℓ+1)/r² - k/r`.
pub fn apply_hl<R: Real>(f: &RadialFunction<R>, ell: i64, p: &KcParams<R>) -> RadialFunction<R> {
    radial_combo(
        f,
        &[(2, 0, cint(-1)), (1, -1, cint(-2)), (0, -2, cint(ell * (ell + 1))), (0, -1, creal(-p.k.clone()))],
    )
}

/// `d⁺_{r,ℓ+1}` or `d⁻_{r,ℓ}` applied to a function at angular momentum ℓ.
pub fn shift_r<R: Real>(f: &RadialFunction<R>, ell: i64, p: &KcParams<R>, sign: Sign) -> Result<RadialFunction<R>, QmError> {
    match sign {
        Sign::Plus => {
            let c = -p.k.clone() / R::from_i64(2 * (ell + 1));
            Ok(radial_combo(f, &[(1, 0, cint(-1)), (0, -1, cint(ell)), (0, 0, creal(c))]))
        }
        Sign::Minus => {
            if ell == 0 {
                return Err(QmError::Parameter("d- is undefined at l = 0".into()));
            }
            let c = -p.k.clone() / R::from_i64(2 * ell);
            Ok(radial_combo(f, &[(1, 0, cint(1)), (0, -1, cint(ell + 1)), (0, 0, creal(c))]))
        }
    }
}

/// `E_n = -k²/(4(n+1)²)`.
pub fn energy<R: Real>(n: i64, p: &KcParams<R>) -> R {
    -(p.k.clone() * p.k.clone()) / R::from_i64(4 * (n + 1) * (n + 1))
}

/// `ĥ_n = -r²∂²_r - 2r∂_r - r²E_n - kr`, eigenvalue `-ℓ(ℓ+1)` on `R_n^ℓ`.
pub fn apply_hhat<R: Real>(f: &RadialFunction<R>, n: i64, p: &KcParams<R>) -> RadialFunction<R> {
    radial_combo(
        f,
        &[(2, 2, cint(-1)), (1, 1, cint(-2)), (0, 2, creal(-energy(n, p))), (0, 1, creal(-p.k.clone()))],
    )
}

/// `D_n` (`λ = (n+1)/n`) or its inverse.
pub fn apply_dilation<R: Real>(f: &RadialFunction<R>, n: i64, inverse: bool) -> Result<RadialFunction<R>, QmError> {
    if n < 1 {
        return Err(QmError::Parameter(format!("dilation needs n >= 1, got {n}")));
    }
    let lambda = if inverse { R::from_ratio(n, n + 1) } else { R::from_ratio(n + 1, n) };
    Ok(f.scale_arg(&lambda)?)
}

/// `Λ±_{r,n}` with `n` the upper level of the pair it connects.
pub fn ladder_r<R: Real>(f: &RadialFunction<R>, n: i64, p: &KcParams<R>, sign: Sign) -> Result<RadialFunction<R>, QmError> {
    let kappa = p.k.clone() / R::from_i64(2 * (n + 1));
    match sign {
        Sign::Plus => {
            if n < 1 {
                return Err(QmError::Parameter("raising ladder needs n >= 1".into()));
            }
            let g = apply_dilation(f, n, true)?;
            Ok(radial_combo(&g, &[(1, 1, cint(-1)), (0, 1, creal(kappa)), (0, 0, cint(-(n + 1)))]))
        }
        Sign::Minus => {
            let inner = radial_combo(f, &[(1, 1, cint(1)), (0, 1, creal(kappa)), (0, 0, cint(-n))]);
            if n == 0 {
                if inner.is_zero() {
                    return Ok(inner);
                }
                return Err(QmError::Parameter("no level below n = 0".into()));
            }
            apply_dilation(&inner, n, false)
        }
    }
}

/// Ground state `e^{-kr/2}`.
pub fn ground_radial<R: Real>(p: &KcParams<R>) -> RadialFunction<R> {
    RadialFunction::monomial(0, cint(1), -p.k.clone() / R::from_i64(2), R::zero())
}

/// `Ŝ⁺ = d⁺_{r,ℓ+1} λ⁺_{ℓ+1}`, `Ŝ⁻ = d⁻_{r,ℓ} λ⁻_ℓ`: `ℓ → ℓ ± 1` at fixed `(n, m)`.
pub fn symmetry_s<R: Real>(state: &SeparatedState<R>, p: &KcParams<R>, sign: Sign) -> Result<SeparatedState<R>, QmError> {
    let ell = state.ell;
    let target = ell + sign.factor();
    let angular = match sign {
        Sign::Plus => ladder_theta(&state.angular, ell + 1, sign),
        Sign::Minus => ladder_theta(&state.angular, ell, sign),
    };
    if angular.is_zero() || state.radial.is_zero() {
        return Ok(SeparatedState::zero(state.n, target, state.m));
    }
    let radial = shift_r(&state.radial, ell, p, sign)?;
    Ok(SeparatedState { radial, angular, azimuthal: state.azimuthal, n: state.n, ell: target, m: state.m })
}

/// `Ψ_{n,ℓ,m} = (L̂⁺)^m (Ŝ⁺)^ℓ Λ⁺_n ⋯ Λ⁺_1 Ψ_0`; float fields return unit-norm states.
pub fn build_state<R: Real>(n: i64, ell: i64, m: i64, p: &KcParams<R>) -> Result<SeparatedState<R>, QmError> {
    check_labels(n, ell, m)?;
    let mut radial = ground_radial(p);
    for level in 1..=n {
        radial = ladder_r(&radial, level, p, Sign::Plus)?;
    }
    let pair = seed_pair::<R>();
    let mut state = SeparatedState { radial, angular: pair.theta, azimuthal: pair.mode, n, ell: 0, m: 0 };
    for _ in 0..ell {
        state = symmetry_s(&state, p, Sign::Plus)?;
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

/// `|Ĥ_ℓ R - E_n R|` relative to `R`.
pub fn eigen_residual<R: Real>(state: &SeparatedState<R>, p: &KcParams<R>) -> f64 {
    let lhs = apply_hl(&state.radial, state.ell, p);
    lhs.residual(&state.radial.scale(&creal(energy(state.n, p))))
}

/// Nonzero states generated at level `n`, over all `(ℓ, m)`.
pub fn degeneracy<R: Real>(n: i64, p: &KcParams<R>) -> Result<usize, QmError> {
    let mut count = 0;
    for ell in 0..=n {
        for m in -ell..=ell {
            if !build_state(n, ell, m, p)?.is_zero() {
                count += 1;
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn pk(k: i64) -> KcParams<Exact> {
        KcParams::new(Exact::from_i64(k)).unwrap()
    }

    #[test]
    fn hamiltonian_examples() {
        let p = pk(1);
        let g = ground_radial(&p);
        assert_eq!(apply_hl(&g, 0, &p), g.scale_real(Exact::from_ratio(-1, 4)));
        let g1 = RadialFunction::monomial(1, cint(1), Exact::from_ratio(-1, 4), Exact::from_i64(0));
        assert_eq!(apply_hl(&g1, 1, &p), g1.scale_real(Exact::from_ratio(-1, 16)));
        let one = RadialFunction::monomial(0, cint(1), Exact::from_i64(0), Exact::from_i64(0));
        assert_eq!(apply_hl(&one, 0, &p), RadialFunction::monomial(-1, cint(-1), Exact::from_i64(0), Exact::from_i64(0)));
    }

    #[test]
    fn energies() {
        let f = |n, k: f64| energy(n, &KcParams::new(k).unwrap());
        assert_eq!(f(0, 1.0), -0.25);
        assert_eq!(f(1, 1.0), -0.0625);
        assert_eq!(f(0, 2.0), -1.0);
    }

    #[test]
    fn hhat_examples() {
        let p = pk(1);
        assert!(apply_hhat(&ground_radial(&p), 0, &p).is_zero());
        let g1 = RadialFunction::monomial(1, cint(1), Exact::from_ratio(-1, 4), Exact::from_i64(0));
        assert_eq!(apply_hhat(&g1, 1, &p), g1.scale_real(Exact::from_i64(-2)));
    }

    #[test]
    fn dilation_examples() {
        let f = RadialFunction::monomial(1, cint(1), Exact::from_i64(-1), Exact::from_i64(0));
        let d = apply_dilation(&f, 1, false).unwrap();
        assert_eq!(d, RadialFunction::monomial(1, cint(2), Exact::from_i64(-2), Exact::from_i64(0)));
        assert_eq!(apply_dilation(&d, 1, true).unwrap(), f);
        assert!(apply_dilation(&f, 0, false).is_err());
    }

    #[test]
    fn ladder_edges() {
        let p = pk(1);
        assert!(ladder_r(&ground_radial(&p), 0, &p, Sign::Minus).unwrap().is_zero());
        assert!(ladder_r(&ground_radial(&p), 0, &p, Sign::Plus).is_err());
        // Λ⁺_1 e^{-kr/2} = (kr/2 - 2) e^{-kr/4}
        let up = ladder_r(&ground_radial(&p), 1, &p, Sign::Plus).unwrap();
        let expected = RadialFunction::new(0, vec![cint(-2), creal(Exact::from_ratio(1, 2))], Exact::from_ratio(-1, 4), Exact::from_i64(0));
        assert_eq!(up, expected);
        assert!(shift_r(&up, 0, &p, Sign::Minus).is_err());
    }

    #[test]
    fn states() {
        let p = pk(2);
        for n in 0..=3 {
            for ell in 0..=n {
                let s = build_state(n, ell, 0, &p).unwrap();
                assert_eq!(eigen_residual(&s, &p), 0.0, "n={n} l={ell}");
            }
            let top = build_state(n, n, 0, &p).unwrap();
            assert!(symmetry_s(&top, &p, Sign::Plus).unwrap().is_zero());
            assert!(shift_r(&top.radial, n, &p, Sign::Plus).unwrap().is_zero());
        }
        let f = KcParams::new(1.0).unwrap();
        let s = build_state(1, 0, 0, &f).unwrap();
        assert!((s.norm_sq() - 1.0).abs() < 1e-12);
        let shape = RadialFunction::from_real_poly(&[1.0, -0.25], -0.25, 0.0);
        assert!(s.radial.proportional(&shape, 1e-12).is_some());
        assert_eq!(degeneracy(3, &f).unwrap(), 16);
    }
}
