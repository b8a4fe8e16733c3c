//! Sampled checks of the classical catalog: the modulus table, the bracket
//! relations of the shift, ladder and symmetry functions, conservation of
//! the symmetries and agreement of jet gradients with finite differences.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classical::poisson::bracket_from_gradients;
use crate::classical::{
    bracket_ids_fd, catalog, evaluate, fd_gradient, gradient, random_point, ClassicalError, Frozen, ObservableId,
    PhasePoint, Semantics, SystemKind,
};
use crate::report::{Check, VerificationReport};
use crate::scalar::{Sign, C64};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub modulus: f64,
    pub bracket: f64,
    pub conserved: f64,
    pub gradient: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { modulus: 1e-10, bracket: 1e-6, conserved: 1e-8, gradient: 1e-7 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassicalSuite {
    pub sys: SystemKind,
    pub samples: usize,
    pub seed: u64,
    pub step: f64,
    pub tol: Tolerances,
}

impl ClassicalSuite {
    pub fn new(sys: SystemKind, samples: usize, seed: u64) -> Self {
        Self { sys, samples, seed, step: crate::classical::DEFAULT_STEP, tol: Tolerances::default() }
    }

    pub fn run(&self) -> VerificationReport {
        let pts = sample_points(&self.sys, self.samples, self.seed);
        let key = match self.sys {
            SystemKind::Ho { .. } => "omega",
            SystemKind::Kc { .. } => "k",
        };
        let mut rep = VerificationReport::new("classical", self.sys.name())
            .param(key, self.sys.coupling())
            .param("samples", self.samples as f64)
            .param("step", self.step);
        rep.seed = Some(self.seed);
        rep.extend(modulus_checks(&self.sys, &pts, self.tol.modulus));
        rep.extend(bracket_checks(&self.sys, &pts, self.step, self.tol.bracket));
        rep.extend(conservation_checks(&self.sys, &pts, self.step, self.tol.conserved));
        rep.extend(gradient_checks(&self.sys, &pts, self.step, self.tol.gradient));
        rep
    }
}

pub fn sample_points(sys: &SystemKind, n: usize, seed: u64) -> Vec<PhasePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| random_point(sys, &mut rng)).collect()
}

type Target<'a> = Box<dyn Fn(&PhasePoint) -> (f64, f64) + 'a>;

/// `|f|² = target` with the target's natural scale, live `ℓ, m`.
fn modulus(name: String, sys: &SystemKind, id: ObservableId, pts: &[PhasePoint], tol: f64, target: Target) -> Check {
    let mut c = Check::new(name, tol);
    for pt in pts {
        match evaluate(id, sys, pt, None) {
            Ok(v) => {
                let (want, scale) = target(pt);
                c.record((v.norm_sqr() - want).abs() / scale.max(1e-300));
            }
            Err(e) => c.fail(e),
        }
    }
    c
}

/// The moduli of the factorization table plus the radial ladder moduli.
pub fn modulus_checks(sys: &SystemKind, pts: &[PhasePoint], tol: f64) -> Vec<Check> {
    let mut out = Vec::new();
    let h = move |pt: &PhasePoint| sys.hamiltonian(pt);
    for s in Sign::both() {
        let ang: fn(&PhasePoint) -> (f64, f64) = |pt| (pt.l2() - pt.lz() * pt.lz(), pt.l2());
        out.push(modulus(format!("|A{s}|^2 = L2 - Lz^2"), sys, ObservableId::AngularSym(s), pts, tol, Box::new(ang)));
        out.push(modulus(
            format!("|lambda{s}_theta|^2 = L2 - Lz^2"),
            sys,
            ObservableId::LadderTheta(s),
            pts,
            tol,
            Box::new(ang),
        ));
        out.push(modulus(format!("|sigma{s}_theta|^2 = L2 - p_phi^2"), sys, ObservableId::ShiftTheta(s), pts, tol, Box::new(ang)));
        match *sys {
            SystemKind::Ho { omega } => {
                let wl = move |pt: &PhasePoint| omega * pt.l2().sqrt();
                out.push(modulus(
                    format!("|a{s}|^2 = H + omega l"),
                    sys,
                    ObservableId::FactorA(s),
                    pts,
                    tol,
                    Box::new(move |pt| (h(pt) + wl(pt), h(pt).abs() + wl(pt))),
                ));
                out.push(modulus(
                    format!("|b{s}|^2 = H - omega l"),
                    sys,
                    ObservableId::FactorB(s),
                    pts,
                    tol,
                    Box::new(move |pt| (h(pt) - wl(pt), h(pt).abs() + wl(pt))),
                ));
                out.push(modulus(
                    format!("|lambda{s}_r|^2 = H^2 - omega^2 L2"),
                    sys,
                    ObservableId::LadderR(s),
                    pts,
                    tol,
                    Box::new(move |pt| (h(pt).powi(2) - wl(pt).powi(2), h(pt).powi(2) + wl(pt).powi(2))),
                ));
            }
            SystemKind::Kc { k } => {
                let c = move |pt: &PhasePoint| k * k / (4.0 * pt.l2());
                out.push(modulus(
                    format!("|sigma{s}_r|^2 = H + k^2/(4 L2)"),
                    sys,
                    ObservableId::ShiftR(s),
                    pts,
                    tol,
                    Box::new(move |pt| (h(pt) + c(pt), h(pt).abs() + c(pt))),
                ));
                let d = move |pt: &PhasePoint| k * k / (-4.0 * h(pt));
                out.push(modulus(
                    format!("|lambda{s}_r|^2 = k^2/(-4H) - L2"),
                    sys,
                    ObservableId::LadderR(s),
                    pts,
                    tol,
                    Box::new(move |pt| (d(pt) - pt.l2(), d(pt) + pt.l2())),
                ));
            }
        }
    }
    out
}

type Coef<'a> = Box<dyn Fn(&PhasePoint, f64) -> C64 + 'a>;

/// `{a, b} = coef(pt, H) · target` through the finite-difference oracle.
/// A failing check notes when the opposite sign would have passed.
#[allow(clippy::too_many_arguments)]
fn relation(
    name: String,
    sys: &SystemKind,
    a: ObservableId,
    b: ObservableId,
    target: Option<ObservableId>,
    coef: Coef,
    pts: &[PhasePoint],
    step: f64,
    tol: f64,
) -> Check {
    let mut c = Check::new(name, tol);
    let mut flipped = 0.0f64;
    for pt in pts {
        let frozen = Some(Frozen::at(pt));
        let eval = || -> Result<(C64, C64), ClassicalError> {
            let got = bracket_ids_fd(a, b, sys, pt, Semantics::Frozen, step)?;
            let t = match target {
                Some(id) => evaluate(id, sys, pt, frozen)?,
                None => C64::new(1.0, 0.0),
            };
            Ok((got, coef(pt, sys.hamiltonian(pt)) * t))
        };
        match eval() {
            Ok((got, want)) => {
                let scale = want.norm().max(1.0);
                c.record((got - want).norm() / scale);
                flipped = flipped.max((got + want).norm() / scale);
            }
            Err(e) => c.fail(e),
        }
    }
    if !c.passed && c.error.is_none() && flipped <= tol {
        c.error = Some(format!("holds with the opposite sign (max residual {flipped:.3e})"));
    }
    c
}

fn i_times(x: f64) -> C64 {
    C64::new(0.0, x)
}

/// Bracket relations of the angular, radial and symmetry functions.
pub fn bracket_checks(sys: &SystemKind, pts: &[PhasePoint], step: f64, tol: f64) -> Vec<Check> {
    use ObservableId::*;
    let mut out = Vec::new();
    let mut rel = |name: String, a, b, target, coef: Coef| {
        out.push(relation(name, sys, a, b, target, coef, pts, step, tol));
    };
    for s in Sign::both() {
        let f = s.factor() as f64;
        let sg = if f > 0.0 { "-" } else { "+" };
        rel(format!("{{Lz, l{s}_phi}} = {sg}i l{s}_phi"), Lz, LadderPhi(s), Some(LadderPhi(s)), Box::new(move |_, _| i_times(-f)));
        rel(
            format!("{{L2, sigma{s}_theta}} = {s}i (2m/sin^2) sigma{s}_theta"),
            L2,
            ShiftTheta(s),
            Some(ShiftTheta(s)),
            Box::new(move |pt, _| i_times(f * 2.0 * pt.p_phi / pt.theta.sin().powi(2))),
        );
        rel(
            format!("{{L2, lambda{s}_theta}} = {sg}2il lambda{s}_theta"),
            L2,
            LadderTheta(s),
            Some(LadderTheta(s)),
            Box::new(move |pt, _| i_times(-f * 2.0 * pt.l2().sqrt())),
        );
        rel(
            format!("{{sqrtL2, lambda{s}_theta}} = {sg}i lambda{s}_theta"),
            SqrtL2,
            LadderTheta(s),
            Some(LadderTheta(s)),
            Box::new(move |_, _| i_times(-f)),
        );
        match *sys {
            SystemKind::Ho { omega } => {
                rel(
                    format!("{{H, lambda{s}_r}} = {sg}2i omega lambda{s}_r"),
                    H,
                    LadderR(s),
                    Some(LadderR(s)),
                    Box::new(move |_, _| i_times(-f * 2.0 * omega)),
                );
                rel(
                    format!("{{H, sigma{s}_r}} = {s}i (4l/r^2) sigma{s}_r"),
                    H,
                    ShiftR(s),
                    Some(ShiftR(s)),
                    Box::new(move |pt, _| i_times(f * 4.0 * pt.l2().sqrt() / (pt.r * pt.r))),
                );
                rel(
                    format!("{{sqrtL2, S{s}}} = {sg}2i S{s}"),
                    SqrtL2,
                    SymS(s),
                    Some(SymS(s)),
                    Box::new(move |_, _| i_times(-2.0 * f)),
                );
            }
            SystemKind::Kc { k } => {
                rel(
                    format!("{{H, sigma{s}_r}} = {s}i (2l/r^2) sigma{s}_r"),
                    H,
                    ShiftR(s),
                    Some(ShiftR(s)),
                    Box::new(move |pt, _| i_times(f * 2.0 * pt.l2().sqrt() / (pt.r * pt.r))),
                );
                rel(
                    format!("{{H, lambda{s}_r}} = {sg}i alpha(H) lambda{s}_r"),
                    H,
                    LadderR(s),
                    Some(LadderR(s)),
                    Box::new(move |_, h| i_times(-f * 4.0 * (-h).powf(1.5) / k)),
                );
                rel(
                    format!("{{sqrtL2, S{s}}} = {sg}i S{s}"),
                    SqrtL2,
                    SymS(s),
                    Some(SymS(s)),
                    Box::new(move |_, _| i_times(-f)),
                );
            }
        }
    }
    if let SystemKind::Kc { k } = *sys {
        rel(
            "{lambda+_r, lambda-_r} = ik/sqrt(-H)".into(),
            LadderR(Sign::Plus),
            LadderR(Sign::Minus),
            None,
            Box::new(move |_, h| i_times(k / (-h).sqrt())),
        );
    }
    out
}

/// `{f, g} = 0` normalized by the size of the individual bracket terms.
fn commutes(name: String, sys: &SystemKind, a: ObservableId, b: ObservableId, sem: Semantics, pts: &[PhasePoint], step: f64, tol: f64) -> Check {
    let mut c = Check::new(name, tol);
    for pt in pts {
        let frozen = match sem {
            Semantics::Frozen => Some(Frozen::at(pt)),
            Semantics::Live => None,
        };
        let run = || -> Result<f64, ClassicalError> {
            let got = bracket_ids_fd(a, b, sys, pt, sem, step)?;
            let (da, db) = (gradient(a, sys, pt, frozen)?, gradient(b, sys, pt, frozen)?);
            let scale: f64 = (0..3)
                .map(|j| {
                    let q = 2 * j;
                    da[q].norm() * db[q + 1].norm() + da[q + 1].norm() * db[q].norm()
                })
                .sum();
            Ok(got.norm() / scale.max(1.0))
        };
        c.record_result(run());
    }
    c
}

/// Vanishing brackets with `H` and `L²`.
pub fn conservation_checks(sys: &SystemKind, pts: &[PhasePoint], step: f64, tol: f64) -> Vec<Check> {
    use ObservableId::*;
    let mut out = Vec::new();
    let live = Semantics::Live;
    for (a, b, sem) in [(H, L2, live), (H, Lz, live), (L2, Lz, live), (H, XSym, live), (H, XAnti, live)] {
        out.push(commutes(format!("{{{}, {}}} = 0", a.label(), b.label()), sys, a, b, sem, pts, step, tol));
    }
    for s in Sign::both() {
        for (a, b, sem) in [(H, AngularSym(s), live), (L2, AngularSym(s), live), (H, SymS(s), Semantics::Frozen)] {
            out.push(commutes(format!("{{{}, {}}} = 0", a.label(), b.label()), sys, a, b, sem, pts, step, tol));
        }
    }
    out
}

/// Jet gradients of every catalog entry against finite differences.
pub fn gradient_checks(sys: &SystemKind, pts: &[PhasePoint], step: f64, tol: f64) -> Vec<Check> {
    let mut c = Check::new("analytic gradients = finite differences", tol);
    for pt in pts {
        for id in catalog(sys) {
            let run = || -> Result<f64, ClassicalError> {
                let g = gradient(id, sys, pt, None)?;
                let fd = fd_gradient(|x| Ok(crate::classical::eval(id, sys, x, None)?.value()), pt, step)?;
                let scale = g.iter().map(|v| v.norm()).fold(1.0, f64::max);
                Ok(g.iter().zip(fd).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max) / scale)
            };
            c.record_result(run());
        }
    }
    vec![c]
}

/// Analytic counterpart of [`bracket_ids_fd`] on the jet gradients.
pub fn bracket_analytic(a: ObservableId, b: ObservableId, sys: &SystemKind, pt: &PhasePoint) -> Result<C64, ClassicalError> {
    let f = Some(Frozen::at(pt));
    Ok(bracket_from_gradients(&gradient(a, sys, pt, f)?, &gradient(b, sys, pt, f)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        for sys in [SystemKind::ho(1.3).unwrap(), SystemKind::kc(0.8).unwrap()] {
            let rep = ClassicalSuite::new(sys, 25, 11).run();
            let bad: Vec<_> = rep.failures().collect();
            assert!(bad.is_empty(), "{bad:#?}");
        }
    }

    #[test]
    fn sign_flip_is_reported() {
        let sys = SystemKind::ho(1.0).unwrap();
        let pts = sample_points(&sys, 5, 1);
        let c = relation(
            "wrong".into(),
            &sys,
            ObservableId::Lz,
            ObservableId::LadderPhi(Sign::Plus),
            Some(ObservableId::LadderPhi(Sign::Plus)),
            Box::new(|_, _| i_times(1.0)),
            &pts,
            1e-3,
            1e-6,
        );
        assert!(!c.passed);
        assert!(c.error.unwrap().contains("opposite sign"));
    }
}
