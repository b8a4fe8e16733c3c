//! Poisson brackets `{f, g} = Σ_q (∂f/∂q ∂g/∂p_q - ∂f/∂p_q ∂g/∂q)`, either
//! from central differences with one Richardson step or from the jet
//! gradients of the catalog.

use super::catalog::{eval, gradient, Frozen, ObservableId};
use super::jet::{Cplx, Jet};
use super::phase::{PhasePoint, SystemKind, Q_SLOTS};
use super::ClassicalError;
use crate::scalar::C64;

pub const DEFAULT_STEP: f64 = 3e-5;

/// Frozen or live `ℓ, m` inside bracket arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Semantics {
    Live,
    Frozen,
}

impl Semantics {
    fn at(self, pt: &PhasePoint) -> Option<Frozen> {
        match self {
            Semantics::Live => None,
            Semantics::Frozen => Some(Frozen::at(pt)),
        }
    }
}

fn guard(pt: &PhasePoint, h: f64) -> Result<(), ClassicalError> {
    if !(h > 0.0) {
        return Err(ClassicalError::Invalid(format!("step must be positive, got {h}")));
    }
    if pt.r <= 10.0 * h || pt.theta.sin() <= 10.0 * h {
        return Err(ClassicalError::Singular(format!(
            "point too close to a coordinate singularity for step {h} (r={}, sin theta={})",
            pt.r,
            pt.theta.sin()
        )));
    }
    Ok(())
}

/// Central-difference gradient, Richardson-extrapolated from steps `h` and `h/2`.
pub fn fd_gradient<F>(f: F, pt: &PhasePoint, h: f64) -> Result<[C64; 6], ClassicalError>
where
    F: Fn(&[f64; 6]) -> Result<C64, ClassicalError>,
{
    guard(pt, h)?;
    let x0 = pt.to_array();
    let central = |i: usize, step: f64| -> Result<C64, ClassicalError> {
        let (mut xp, mut xm) = (x0, x0);
        xp[i] += step;
        xm[i] -= step;
        Ok((f(&xp)? - f(&xm)?) / (2.0 * step))
    };
    let mut out = [C64::new(0.0, 0.0); 6];
    for (i, slot) in out.iter_mut().enumerate() {
        let coarse = central(i, h)?;
        let fine = central(i, h / 2.0)?;
        *slot = (fine * 4.0 - coarse) / 3.0;
    }
    Ok(out)
}

pub fn bracket_from_gradients(df: &[C64; 6], dg: &[C64; 6]) -> C64 {
    Q_SLOTS.iter().map(|&q| df[q] * dg[q + 1] - df[q + 1] * dg[q]).sum()
}

/// Finite-difference bracket of two arbitrary functions.
pub fn bracket_fd<F, G>(f: F, g: G, pt: &PhasePoint, h: f64) -> Result<C64, ClassicalError>
where
    F: Fn(&[f64; 6]) -> Result<C64, ClassicalError>,
    G: Fn(&[f64; 6]) -> Result<C64, ClassicalError>,
{
    Ok(bracket_from_gradients(&fd_gradient(f, pt, h)?, &fd_gradient(g, pt, h)?))
}

/// Finite-difference bracket of two catalog entries.
pub fn bracket_ids_fd(
    a: ObservableId,
    b: ObservableId,
    sys: &SystemKind,
    pt: &PhasePoint,
    sem: Semantics,
    h: f64,
) -> Result<C64, ClassicalError> {
    let frozen = sem.at(pt);
    bracket_fd(
        |x| Ok(eval(a, sys, x, frozen)?.value()),
        |x| Ok(eval(b, sys, x, frozen)?.value()),
        pt,
        h,
    )
}

/// Bracket of two catalog entries from their closed-form gradients.
pub fn bracket_ids(
    a: ObservableId,
    b: ObservableId,
    sys: &SystemKind,
    pt: &PhasePoint,
    sem: Semantics,
) -> Result<C64, ClassicalError> {
    let frozen = sem.at(pt);
    Ok(bracket_from_gradients(&gradient(a, sys, pt, frozen)?, &gradient(b, sys, pt, frozen)?))
}

/// Gradient of any jet-generic function.
pub fn jet_gradient<F>(f: F, pt: &PhasePoint) -> Result<[C64; 6], ClassicalError>
where
    F: Fn(&[Jet; 6]) -> Result<Cplx<Jet>, ClassicalError>,
{
    let x = pt.to_array();
    let jets: [Jet; 6] = std::array::from_fn(|i| Jet::var(x[i], i));
    let v = f(&jets)?;
    Ok(std::array::from_fn(|i| C64::new(v.re.d[i], v.im.d[i])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Sign;
    use std::f64::consts::FRAC_PI_2;

    fn pt() -> PhasePoint {
        PhasePoint::new(1.3, 0.4, 1.0, -0.2, 0.7, 0.6).unwrap()
    }

    #[test]
    fn canonical_pair() {
        let ho = SystemKind::ho(1.0).unwrap();
        let b = bracket_ids_fd(ObservableId::Coord(0), ObservableId::Coord(1), &ho, &pt(), Semantics::Live, DEFAULT_STEP)
            .unwrap();
        assert!((b - C64::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn lz_phi_ladder() {
        let ho = SystemKind::ho(1.0).unwrap();
        let p = pt();
        let l = crate::classical::evaluate(ObservableId::LadderPhi(Sign::Plus), &ho, &p, None).unwrap();
        let b = bracket_ids_fd(ObservableId::Lz, ObservableId::LadderPhi(Sign::Plus), &ho, &p, Semantics::Live, DEFAULT_STEP)
            .unwrap();
        assert!((b - C64::new(0.0, -1.0) * l).norm() < 1e-9);
    }

    #[test]
    fn ho_radial_ladder_frequency() {
        let ho = SystemKind::ho(1.5).unwrap();
        let p = pt();
        for s in Sign::both() {
            let id = ObservableId::LadderR(s);
            let v = crate::classical::evaluate(id, &ho, &p, Some(Frozen::at(&p))).unwrap();
            let b = bracket_ids_fd(ObservableId::H, id, &ho, &p, Semantics::Frozen, DEFAULT_STEP).unwrap();
            let want = C64::new(0.0, -2.0 * 1.5 * s.factor() as f64) * v;
            assert!((b - want).norm() < 1e-7 * (1.0 + want.norm()), "{b} vs {want}");
        }
    }

    #[test]
    fn singular_points_rejected() {
        let ho = SystemKind::ho(1.0).unwrap();
        let p = PhasePoint::new(1e-4, 0.0, FRAC_PI_2, 0.0, 0.0, 1.0).unwrap();
        let out = bracket_ids_fd(ObservableId::H, ObservableId::L2, &ho, &p, Semantics::Live, DEFAULT_STEP);
        assert!(matches!(out, Err(ClassicalError::Singular(_))));
    }

    #[test]
    fn analytic_matches_fd_for_xanti() {
        let kc = SystemKind::kc(1.0).unwrap();
        let p = PhasePoint::new(1.1, 0.2, 1.2, 0.3, 0.4, 0.5).unwrap();
        let a = bracket_ids(ObservableId::H, ObservableId::XAnti, &kc, &p, Semantics::Live).unwrap();
        assert!(a.norm() < 1e-12);
        let g1 = gradient(ObservableId::XAnti, &kc, &p, None).unwrap();
        let g2 = fd_gradient(|x| Ok(eval(ObservableId::XAnti, &kc, x, None)?.value()), &p, DEFAULT_STEP).unwrap();
        for i in 0..6 {
            assert!((g1[i] - g2[i]).norm() < 1e-8);
        }
    }
}
