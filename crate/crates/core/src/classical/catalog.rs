//! Phase-space functions of the catalog, each evaluated generically over a
//! [`Scalar`] so that one definition yields both values and gradients.

use serde::{Deserialize, Serialize};

use super::jet::{Cplx, Jet, Scalar};
use super::phase::{PhasePoint, SystemKind};
use super::ClassicalError;
use crate::scalar::{Sign, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableId {
    /// The `i`-th canonical coordinate, in `(r, p_r, θ, p_θ, φ, p_φ)` order.
    Coord(usize),
    H,
    L2,
    /// `√L²`, the classical `ℓ`.
    SqrtL2,
    Lz,
    LadderPhi(Sign),
    ShiftTheta(Sign),
    AngularSym(Sign),
    LadderTheta(Sign),
    /// HO factor `a±`.
    FactorA(Sign),
    /// HO factor `b±`.
    FactorB(Sign),
    ShiftR(Sign),
    LadderR(Sign),
    SymS(Sign),
    XSym,
    XAnti,
    /// Cartesian angular momentum component `0..3`.
    AngMom(usize),
    /// HO Fradkin tensor `Q_ij`.
    Fradkin(usize, usize),
    /// KC Runge-Lenz component.
    RungeLenz(usize),
}

impl ObservableId {
    pub fn label(&self) -> String {
        match self {
            Self::Coord(i) => ["r", "p_r", "theta", "p_theta", "phi", "p_phi"].get(*i).unwrap_or(&"?").to_string(),
            Self::H => "H".into(),
            Self::L2 => "L2".into(),
            Self::SqrtL2 => "sqrtL2".into(),
            Self::Lz => "Lz".into(),
            Self::LadderPhi(s) => format!("l{s}_phi"),
            Self::ShiftTheta(s) => format!("sigma{s}_theta"),
            Self::AngularSym(s) => format!("A{s}"),
            Self::LadderTheta(s) => format!("lambda{s}_theta"),
            Self::FactorA(s) => format!("a{s}"),
            Self::FactorB(s) => format!("b{s}"),
            Self::ShiftR(s) => format!("sigma{s}_r"),
            Self::LadderR(s) => format!("lambda{s}_r"),
            Self::SymS(s) => format!("S{s}"),
            Self::XSym => "Xsym".into(),
            Self::XAnti => "Xanti".into(),
            Self::AngMom(i) => format!("L_{}", axis(*i)),
            Self::Fradkin(i, j) => format!("Q_{}{}", axis(*i), axis(*j)),
            Self::RungeLenz(i) => format!("A_{}", axis(*i)),
        }
    }
}

fn axis(i: usize) -> char {
    ['x', 'y', 'z'].get(i).copied().unwrap_or('?')
}

/// Values of `ℓ` and `m` held fixed while differentiating, as in the
/// reduced-Hamiltonian brackets `{·,·}_{L²→ℓ²}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frozen {
    pub ell: f64,
    pub m: f64,
}

impl Frozen {
    pub fn at(pt: &PhasePoint) -> Self {
        Self { ell: pt.l2().sqrt(), m: pt.p_phi }
    }
}

struct Geometry<T> {
    x: [T; 3],
    p: [T; 3],
}

fn cartesian<T: Scalar>(c: &[T; 6]) -> Geometry<T> {
    let (r, pr, th, pth, ph, pph) = (c[0], c[1], c[2], c[3], c[4], c[5]);
    let (st, ct, sp, cp) = (th.sin(), th.cos(), ph.sin(), ph.cos());
    let rhat = [st * cp, st * sp, ct];
    let that = [ct * cp, ct * sp, -st];
    let phat = [-sp, cp, T::cst(0.0)];
    let vt = pth / r;
    let vp = pph / (r * st);
    let mut x = rhat;
    let mut p = rhat;
    for i in 0..3 {
        x[i] = rhat[i] * r;
        p[i] = rhat[i] * pr + that[i] * vt + phat[i] * vp;
    }
    Geometry { x, p }
}

fn cross<T: Scalar>(a: &[T; 3], b: &[T; 3]) -> [T; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn runge_lenz<T: Scalar>(g: &Geometry<T>, k: f64) -> [T; 3] {
    let l = cross(&g.x, &g.p);
    let pl = cross(&g.p, &l);
    let r = (g.x[0].sq() + g.x[1].sq() + g.x[2].sq()).sqrt();
    [pl[0] - g.x[0] / r * (k / 2.0), pl[1] - g.x[1] / r * (k / 2.0), pl[2] - g.x[2] / r * (k / 2.0)]
}

fn fradkin<T: Scalar>(g: &Geometry<T>, omega: f64, i: usize, j: usize) -> T {
    g.p[i] * g.p[j] + g.x[i] * g.x[j] * (omega * omega / 4.0)
}

fn real<T: Scalar>(v: T) -> Cplx<T> {
    Cplx::real(v)
}

fn l2_of<T: Scalar>(c: &[T; 6]) -> T {
    c[3].sq() + c[5].sq() / c[2].sin().sq()
}

fn hamiltonian<T: Scalar>(sys: &SystemKind, c: &[T; 6]) -> T {
    let v = match *sys {
        SystemKind::Ho { omega } => c[0].sq() * (omega * omega / 4.0),
        SystemKind::Kc { k } => -(c[0].recip() * k),
    };
    c[1].sq() + v + l2_of(c) / c[0].sq()
}

fn not_defined(id: ObservableId, sys: &SystemKind) -> ClassicalError {
    ClassicalError::NotDefined { observable: id.label(), system: sys.name() }
}

/// Evaluates `id` at the coordinates `c`. With `frozen` set, `ℓ` and `m`
/// inside shift and ladder functions are those constants; otherwise they
/// are `√L²` and `p_φ` of `c`. `H` is never frozen.
pub fn eval<T: Scalar>(
    id: ObservableId,
    sys: &SystemKind,
    c: &[T; 6],
    frozen: Option<Frozen>,
) -> Result<Cplx<T>, ClassicalError> {
    let (r, pr, th, pth, ph, pph) = (c[0], c[1], c[2], c[3], c[4], c[5]);
    let ell = match frozen {
        Some(f) => T::cst(f.ell),
        None => l2_of(c).sqrt(),
    };
    let m = match frozen {
        Some(f) => T::cst(f.m),
        None => pph,
    };
    let cot = th.cos() / th.sin();
    Ok(match id {
        ObservableId::Coord(i) if i < 6 => real(c[i]),
        ObservableId::Coord(_) => return Err(not_defined(id, sys)),
        ObservableId::H => real(hamiltonian(sys, c)),
        ObservableId::L2 => real(l2_of(c)),
        ObservableId::SqrtL2 => real(l2_of(c).sqrt()),
        ObservableId::Lz => real(pph),
        ObservableId::LadderPhi(s) => Cplx::expi(ph * s.factor() as f64),
        ObservableId::ShiftTheta(s) => Cplx::new(-(m * cot), pth * s.factor() as f64),
        ObservableId::AngularSym(s) => {
            Cplx::expi(ph * s.factor() as f64) * Cplx::new(-(pph * cot), pth * s.factor() as f64)
        }
        ObservableId::LadderTheta(s) => ladder_theta(c, ell, s),
        ObservableId::FactorA(s) | ObservableId::FactorB(s) => {
            let SystemKind::Ho { omega } = *sys else { return Err(not_defined(id, sys)) };
            let w = if matches!(id, ObservableId::FactorA(_)) { omega / 2.0 } else { -omega / 2.0 };
            Cplx::new(ell / r + r * w, -(pr * s.factor() as f64))
        }
        ObservableId::ShiftR(s) => shift_r(sys, c, ell, s)?,
        ObservableId::LadderR(s) => match *sys {
            SystemKind::Ho { omega } => {
                let a = Cplx::new(ell / r + r * (omega / 2.0), -(pr * s.factor() as f64));
                let b = Cplx::new(ell / r - r * (omega / 2.0), pr * s.factor() as f64);
                a * b
            }
            SystemKind::Kc { k } => {
                let h = hamiltonian(sys, c);
                if h.val() >= 0.0 {
                    return Err(ClassicalError::Domain(format!("KC radial ladder needs H < 0, got {}", h.val())));
                }
                let e = (-h).sqrt();
                let sf = s.factor() as f64;
                let body = Cplx::new(r * e - e.recip() * (k / 2.0), -(r * pr * sf));
                body * Cplx::expi(-(r * pr * e * (2.0 * sf / k)))
            }
        },
        ObservableId::SymS(s) => {
            let sr = shift_r(sys, c, ell, s)?;
            let lt = ladder_theta(c, ell, s);
            match sys {
                SystemKind::Ho { .. } => sr * lt * lt,
                SystemKind::Kc { .. } => sr * lt,
            }
        }
        ObservableId::XSym => {
            let g = cartesian(c);
            match *sys {
                SystemKind::Ho { omega } => {
                    let l2 = l2_of(c);
                    real((l2 - pph.sq()) * hamiltonian(sys, c) - l2 * fradkin(&g, omega, 2, 2) * 2.0)
                }
                SystemKind::Kc { k } => real(runge_lenz(&g, k)[2]),
            }
        }
        ObservableId::XAnti => {
            let g = cartesian(c);
            let l = cross(&g.x, &g.p);
            match *sys {
                SystemKind::Ho { omega } => {
                    real((l[0] * fradkin(&g, omega, 1, 2) - l[1] * fradkin(&g, omega, 2, 0)) * 2.0)
                }
                SystemKind::Kc { k } => {
                    let a = runge_lenz(&g, k);
                    real(l[0] * a[1] - l[1] * a[0])
                }
            }
        }
        ObservableId::AngMom(i) if i < 3 => {
            let g = cartesian(c);
            real(cross(&g.x, &g.p)[i])
        }
        ObservableId::Fradkin(i, j) if i < 3 && j < 3 => {
            let SystemKind::Ho { omega } = *sys else { return Err(not_defined(id, sys)) };
            real(fradkin(&cartesian(c), omega, i, j))
        }
        ObservableId::RungeLenz(i) if i < 3 => {
            let SystemKind::Kc { k } = *sys else { return Err(not_defined(id, sys)) };
            real(runge_lenz(&cartesian(c), k)[i])
        }
        ObservableId::AngMom(_) | ObservableId::Fradkin(..) | ObservableId::RungeLenz(_) => {
            return Err(not_defined(id, sys))
        }
    })
}

fn ladder_theta<T: Scalar>(c: &[T; 6], ell: T, s: Sign) -> Cplx<T> {
    Cplx::new(ell * c[2].cos(), c[2].sin() * c[3] * s.factor() as f64)
}

fn shift_r<T: Scalar>(sys: &SystemKind, c: &[T; 6], ell: T, s: Sign) -> Result<Cplx<T>, ClassicalError> {
    let (r, pr) = (c[0], c[1]);
    let sf = s.factor() as f64;
    Ok(match *sys {
        SystemKind::Ho { omega } => {
            let b = Cplx::new(ell / r - r * (omega / 2.0), -(pr * sf));
            let a = Cplx::new(ell / r + r * (omega / 2.0), -(pr * sf));
            b * a
        }
        SystemKind::Kc { k } => {
            if ell.val().abs() < 1e-12 {
                return Err(ClassicalError::Domain("KC radial shift needs l > 0".into()));
            }
            Cplx::new(ell / r - ell.recip() * (k / 2.0), -(pr * sf))
        }
    })
}

/// Value of `id` at `pt`.
pub fn evaluate(id: ObservableId, sys: &SystemKind, pt: &PhasePoint, frozen: Option<Frozen>) -> Result<C64, ClassicalError> {
    Ok(eval(id, sys, &pt.to_array(), frozen)?.value())
}

/// Closed-form gradient of `id` in `(r, p_r, θ, p_θ, φ, p_φ)` order.
pub fn gradient(
    id: ObservableId,
    sys: &SystemKind,
    pt: &PhasePoint,
    frozen: Option<Frozen>,
) -> Result<[C64; 6], ClassicalError> {
    let x = pt.to_array();
    let jets: [Jet; 6] = std::array::from_fn(|i| Jet::var(x[i], i));
    let v = eval(id, sys, &jets, frozen)?;
    Ok(std::array::from_fn(|i| C64::new(v.re.d[i], v.im.d[i])))
}

/// Every catalog entry defined for `sys`, both signs included.
pub fn catalog(sys: &SystemKind) -> Vec<ObservableId> {
    use ObservableId::*;
    let mut ids = vec![H, L2, SqrtL2, Lz];
    for s in Sign::both() {
        ids.extend([LadderPhi(s), ShiftTheta(s), AngularSym(s), LadderTheta(s), ShiftR(s), LadderR(s), SymS(s)]);
        if let SystemKind::Ho { .. } = sys {
            ids.extend([FactorA(s), FactorB(s)]);
        }
    }
    ids.extend([XSym, XAnti, AngMom(0), AngMom(1), AngMom(2)]);
    for i in 0..3 {
        match sys {
            SystemKind::Ho { .. } => ids.extend((i..3).map(|j| Fradkin(i, j))),
            SystemKind::Kc { .. } => ids.push(RungeLenz(i)),
        }
    }
    ids
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn ev(id: ObservableId, sys: &SystemKind, pt: &PhasePoint) -> C64 {
        evaluate(id, sys, pt, None).unwrap()
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn angular_examples() {
        let kc = SystemKind::kc(1.0).unwrap();
        let pt = PhasePoint::new(1.0, 0.3, FRAC_PI_4, 0.0, 0.0, 1.0).unwrap();
        assert!(close(ev(ObservableId::ShiftTheta(Sign::Plus), &kc, &pt), C64::new(-1.0, 0.0), 1e-15));
        let pt = PhasePoint::new(1.0, 0.3, FRAC_PI_2, 0.7, FRAC_PI_2, 1.0).unwrap();
        assert!(close(ev(ObservableId::ShiftTheta(Sign::Minus), &kc, &pt), C64::new(0.0, -0.7), 1e-15));
        assert!(close(ev(ObservableId::LadderPhi(Sign::Plus), &kc, &pt), C64::new(0.0, 1.0), 1e-15));
        let pt = PhasePoint::new(1.0, 0.3, 1.1, 0.4, 2.0, 0.8).unwrap();
        let a = ev(ObservableId::AngularSym(Sign::Plus), &kc, &pt);
        let prod = ev(ObservableId::ShiftTheta(Sign::Plus), &kc, &pt) * ev(ObservableId::LadderPhi(Sign::Plus), &kc, &pt);
        assert!(close(a, prod, 1e-14));
        assert!(close(ev(ObservableId::AngularSym(Sign::Minus), &kc, &pt), a.conj(), 1e-14));
    }

    #[test]
    fn circular_points_zero_factors() {
        let kc = SystemKind::kc(1.0).unwrap();
        let pt = kc.circular_point(1.0);
        assert!(ev(ObservableId::ShiftR(Sign::Plus), &kc, &pt).norm() < 1e-15);
        assert!(ev(ObservableId::LadderR(Sign::Minus), &kc, &pt).norm() < 1e-14);
        assert!(ev(ObservableId::SymS(Sign::Plus), &kc, &pt).norm() < 1e-15);
        assert!(ev(ObservableId::XSym, &kc, &pt).norm() < 1e-15);
        let ho = SystemKind::ho(1.0).unwrap();
        let pt = ho.circular_point(1.0);
        assert!(ev(ObservableId::FactorB(Sign::Plus), &ho, &pt).norm() < 1e-15);
        assert!(ev(ObservableId::LadderTheta(Sign::Plus), &ho, &pt).norm() < 1e-15);
    }

    #[test]
    fn kc_xsym_spherical_form() {
        let kc = SystemKind::kc(1.3).unwrap();
        let pt = PhasePoint::new(1.7, -0.4, 0.9, 0.6, 0.3, -0.5).unwrap();
        let l2 = pt.l2();
        let expected = pt.theta.cos() * (l2 / pt.r - 0.65) + pt.p_theta * pt.p_r * pt.theta.sin();
        assert!((ev(ObservableId::XSym, &kc, &pt).re - expected).abs() < 1e-13);
    }

    #[test]
    fn kc_ladder_needs_bound_motion() {
        let kc = SystemKind::kc(1.0).unwrap();
        let pt = PhasePoint::new(1.0, 2.0, 1.0, 0.0, 0.0, 0.1).unwrap();
        assert!(matches!(evaluate(ObservableId::LadderR(Sign::Plus), &kc, &pt, None), Err(ClassicalError::Domain(_))));
        assert!(evaluate(ObservableId::FactorA(Sign::Plus), &kc, &pt, None).is_err());
    }

    #[test]
    fn gradient_examples() {
        let ho = SystemKind::ho(1.0).unwrap();
        let pt = PhasePoint::new(1.2, 0.7, 0.8, 0.3, 0.1, 0.9).unwrap();
        let g = gradient(ObservableId::H, &ho, &pt, None).unwrap();
        assert!((g[1].re - 1.4).abs() < 1e-15);
        let g = gradient(ObservableId::L2, &ho, &pt, None).unwrap();
        let s = pt.theta.sin();
        assert!((g[2].re + 2.0 * 0.81 * pt.theta.cos() / (s * s * s)).abs() < 1e-13);
        let g = gradient(ObservableId::LadderPhi(Sign::Plus), &ho, &pt, None).unwrap();
        assert!(g.iter().enumerate().all(|(i, v)| (i == 4) != (v.norm() == 0.0)));
    }
}
