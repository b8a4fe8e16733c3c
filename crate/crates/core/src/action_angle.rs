//! Action-angle variables read off the phases of the symmetry functions.
//!
//! Each angle is the phase of the raising member of a carrier,
//! `F⁺ = |F| e^{iξ}`: `ξ_φ = arg A⁺`, `ξ_θ = arg S⁺`, `ξ_r = arg λ⁺_r`.
//! The actions are
//! * KC: `J_φ = p_φ`, `J_θ = ℓ - |m|`, `J_r = k/(2√(-H)) - ℓ`;
//! * HO: `J_φ = p_φ`, `J_θ = (ℓ - |m|)/2`, `J_r = H/(2ω) - ℓ/2`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classical::{
    evaluate, fd_gradient, random_point, ClassicalError, ObservableId, PhasePoint, SystemKind,
};
use crate::classical::poisson::bracket_from_gradients;
use crate::dynamics::{propagate, Trajectory};
use crate::report::{Check, VerificationReport};
use crate::scalar::{Sign, C64};

/// Moduli at or below this leave the phase undefined.
pub const DEGENERACY_RADIUS: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ActionAngleSet {
    pub j_phi: f64,
    pub j_theta: f64,
    pub j_r: f64,
    pub xi_phi: f64,
    pub xi_theta: f64,
    pub xi_r: f64,
}

impl ActionAngleSet {
    pub fn actions(&self) -> [f64; 3] {
        [self.j_phi, self.j_theta, self.j_r]
    }

    pub fn angles(&self) -> [f64; 3] {
        [self.xi_phi, self.xi_theta, self.xi_r]
    }
}

/// Argument in `(-π, π]`.
pub fn phase_of(value: C64) -> Result<f64, ClassicalError> {
    if !(value.norm() > DEGENERACY_RADIUS) {
        return Err(ClassicalError::Degenerate(format!("carrier modulus {:.3e} too small for a phase", value.norm())));
    }
    let a = value.arg();
    Ok(if a == -std::f64::consts::PI { std::f64::consts::PI } else { a })
}

/// `(J_φ, J_θ, J_r)`; defined on degenerate orbits as well.
pub fn actions(sys: &SystemKind, pt: &PhasePoint) -> Result<[f64; 3], ClassicalError> {
    let ell = pt.l2().sqrt();
    let m = pt.p_phi;
    let h = sys.hamiltonian(pt);
    Ok(match *sys {
        SystemKind::Kc { k } => {
            if h >= 0.0 {
                return Err(ClassicalError::Domain(format!("KC actions need H < 0, got {h}")));
            }
            [m, ell - m.abs(), k / (2.0 * (-h).sqrt()) - ell]
        }
        SystemKind::Ho { omega } => [m, 0.5 * (ell - m.abs()), h / (2.0 * omega) - 0.5 * ell],
    })
}

/// `(ξ_φ, ξ_θ, ξ_r)` from the carrier phases.
pub fn angles(sys: &SystemKind, pt: &PhasePoint) -> Result<[f64; 3], ClassicalError> {
    if let SystemKind::Ho { omega } = *sys {
        let h = sys.hamiltonian(pt);
        if h * h - omega * omega * pt.l2() <= DEGENERACY_RADIUS * h * h {
            return Err(ClassicalError::Degenerate("H^2 = omega^2 L^2 (circular orbit)".into()));
        }
    }
    let ph = |id| -> Result<f64, ClassicalError> { phase_of(evaluate(id, sys, pt, None)?) };
    Ok([
        ph(ObservableId::AngularSym(Sign::Plus))?,
        ph(ObservableId::SymS(Sign::Plus))?,
        ph(ObservableId::LadderR(Sign::Plus))?,
    ])
}

/// Angles shifted so that the set becomes canonical with the same actions:
/// `ξ'_θ = ξ_θ + ξ_r`, `ξ'_φ = ξ_φ + sgn(m) ξ'_θ / a` with `a` the θ-sector
/// constant.
pub fn completed_angles(sys: &SystemKind, pt: &PhasePoint) -> Result<[f64; 3], ClassicalError> {
    let [xp, xt, xr] = angles(sys, pt)?;
    let theta = xt + xr;
    Ok([xp + pt.p_phi.signum() * theta / theta_sector_constant(sys), theta, xr])
}

pub fn action_angles(sys: &SystemKind, pt: &PhasePoint) -> Result<ActionAngleSet, ClassicalError> {
    let [j_phi, j_theta, j_r] = actions(sys, pt)?;
    let [xi_phi, xi_theta, xi_r] = angles(sys, pt)?;
    Ok(ActionAngleSet { j_phi, j_theta, j_r, xi_phi, xi_theta, xi_r })
}

pub fn actions_kc(pt: &PhasePoint, k: f64) -> Result<ActionAngleSet, ClassicalError> {
    action_angles(&SystemKind::kc(k)?, pt)
}

pub fn actions_ho(pt: &PhasePoint, omega: f64) -> Result<ActionAngleSet, ClassicalError> {
    action_angles(&SystemKind::ho(omega)?, pt)
}

/// Rate `dξ_r/dt`: `α(H) = 4(-H)^{3/2}/k` for KC, `2ω` for HO.
pub fn radial_angle_rate(sys: &SystemKind, h: f64) -> f64 {
    match *sys {
        SystemKind::Kc { k } => 4.0 * (-h).powf(1.5) / k,
        SystemKind::Ho { omega } => 2.0 * omega,
    }
}

/// Bracket constant of `ξ_θ` with `√L²`: 1 for KC, 2 for HO.
pub fn theta_sector_constant(sys: &SystemKind) -> f64 {
    match sys {
        SystemKind::Kc { .. } => 1.0,
        SystemKind::Ho { .. } => 2.0,
    }
}

/// Arccos arguments of the closed forms, one per carrier factor:
/// `(x_φ, x_λθ, x_σr, x_r)`. The cosine of the matching factor phase must
/// equal each (`-x_φ` for the angular shift factor).
pub fn arccos_arguments(sys: &SystemKind, pt: &PhasePoint) -> Result<[f64; 4], ClassicalError> {
    let l2 = pt.l2();
    let ell = l2.sqrt();
    let m = pt.p_phi;
    let h = sys.hamiltonian(pt);
    let sin_i = (l2 - m * m).sqrt();
    let x_phi = m * (pt.theta.cos() / pt.theta.sin()) / sin_i;
    let x_lt = ell / sin_i * pt.theta.cos();
    let (x_sr, x_r) = match *sys {
        SystemKind::Kc { k } => (
            (2.0 * l2 / pt.r - k) / (4.0 * l2 * h + k * k).sqrt(),
            (-k - 2.0 * h * pt.r) / (k * k + 4.0 * h * l2).sqrt(),
        ),
        SystemKind::Ho { omega } => {
            let d = (h * h - omega * omega * l2).sqrt();
            ((-h + 2.0 * l2 / (pt.r * pt.r)) / d, (h - 0.5 * omega * omega * pt.r * pt.r) / d)
        }
    };
    Ok([x_phi, x_lt, x_sr, x_r])
}

/// Largest mismatch between the closed arccos forms and the carrier factor
/// phases, `|cos(arg factor) - x|`.
pub fn arccos_mismatch(sys: &SystemKind, pt: &PhasePoint) -> Result<f64, ClassicalError> {
    let [x_phi, x_lt, x_sr, x_r] = arccos_arguments(sys, pt)?;
    let ev = |id| evaluate(id, sys, pt, None);
    let sigma_theta = phase_of(ev(ObservableId::ShiftTheta(Sign::Plus))?)?;
    let lambda_theta = phase_of(ev(ObservableId::LadderTheta(Sign::Plus))?)?;
    let sigma_r = phase_of(ev(ObservableId::ShiftR(Sign::Plus))?)?;
    let mut lambda_r = phase_of(ev(ObservableId::LadderR(Sign::Plus))?)?;
    if let SystemKind::Kc { k } = *sys {
        lambda_r += 2.0 * pt.r * pt.p_r * (-sys.hamiltonian(pt)).sqrt() / k;
    }
    Ok([
        sigma_theta.cos() + x_phi,
        lambda_theta.cos() - x_lt,
        sigma_r.cos() - x_sr,
        lambda_r.cos() - x_r,
    ]
    .iter()
    .fold(0.0, |m, d| m.max(d.abs())))
}

fn wrap(a: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let w = (a + PI).rem_euclid(TAU) - PI;
    if w == -PI { PI } else { w }
}

/// Either an action or an angle, for bracket evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variable {
    Angle(usize),
    Action(usize),
    CompletedAngle(usize),
}

const NAMES: [&str; 3] = ["phi", "theta", "r"];

impl Variable {
    pub fn label(&self) -> String {
        match self {
            Variable::Angle(i) => format!("xi_{}", NAMES[*i]),
            Variable::Action(i) => format!("J_{}", NAMES[*i]),
            Variable::CompletedAngle(i) => format!("xi'_{}", NAMES[*i]),
        }
    }

    fn value(&self, sys: &SystemKind, x: &[f64; 6]) -> Result<f64, ClassicalError> {
        let pt = PhasePoint::from_array_unchecked(*x);
        match *self {
            Variable::Angle(i) => Ok(angles(sys, &pt)?[i]),
            Variable::Action(i) => Ok(actions(sys, &pt)?[i]),
            Variable::CompletedAngle(i) => Ok(completed_angles(sys, &pt)?[i]),
        }
    }
}

/// Finite-difference gradient of a variable; angles are differenced
/// relative to their value at `pt` so that branch cuts do not leak in.
pub fn variable_gradient(v: Variable, sys: &SystemKind, pt: &PhasePoint, step: f64) -> Result<[C64; 6], ClassicalError> {
    let center = v.value(sys, &pt.to_array())?;
    let angle = !matches!(v, Variable::Action(_));
    fd_gradient(
        |x| {
            let val = v.value(sys, x)?;
            Ok(C64::new(if angle { center + wrap(val - center) } else { val }, 0.0))
        },
        pt,
        step,
    )
}

pub fn variable_bracket(a: Variable, b: Variable, sys: &SystemKind, pt: &PhasePoint, step: f64) -> Result<f64, ClassicalError> {
    Ok(bracket_from_gradients(&variable_gradient(a, sys, pt, step)?, &variable_gradient(b, sys, pt, step)?).re)
}

/// Random point where every carrier phase is well defined.
pub fn random_nondegenerate_point<G: rand::Rng + ?Sized>(sys: &SystemKind, rng: &mut G) -> PhasePoint {
    loop {
        let pt = random_point(sys, rng);
        let l2 = pt.l2();
        if l2 - pt.p_phi * pt.p_phi < 1e-3 * l2 || pt.p_r.abs() < 1e-3 {
            continue;
        }
        if let SystemKind::Ho { omega } = *sys {
            let h = sys.hamiltonian(&pt);
            if h * h - omega * omega * l2 < 1e-3 * h * h {
                continue;
            }
        }
        if let SystemKind::Kc { k } = *sys {
            if 4.0 * l2 * sys.hamiltonian(&pt) + k * k < 1e-3 * k * k {
                continue;
            }
        }
        if angles(sys, &pt).is_ok() {
            return pt;
        }
    }
}

/// Canonical brackets of the action-angle set at random points:
/// `{ξ_i, J_j} = δ_ij`, `{J_i, J_j} = 0`, plus the sector constants
/// `{ξ_θ, √L²}` and `{ξ_r, H}`, and the closed arccos forms.
pub fn verify_canonical_pairs(sys: &SystemKind, samples: usize, seed: u64, step: f64, tol: f64) -> VerificationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<PhasePoint> = (0..samples).map(|_| random_nondegenerate_point(sys, &mut rng)).collect();
    let key = match sys {
        SystemKind::Ho { .. } => "omega",
        SystemKind::Kc { .. } => "k",
    };
    let mut rep = VerificationReport::new("actions", sys.name())
        .param(key, sys.coupling())
        .param("samples", samples as f64)
        .param("step", step);
    rep.seed = Some(seed);
    let pair = |a: Variable, b: Variable, want: f64| {
        let mut c = Check::new(format!("{{{}, {}}} = {want}", a.label(), b.label()), tol);
        for pt in &pts {
            c.record_result(variable_bracket(a, b, sys, pt, step).map(|v| (v - want).abs()));
        }
        c
    };
    let mut checks = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            checks.push(pair(Variable::Angle(i), Variable::Action(j), if i == j { 1.0 } else { 0.0 }));
        }
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        checks.push(pair(Variable::Action(i), Variable::Action(j), 0.0));
    }
    rep.extend(checks);
    let completed: Vec<Check> = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .map(|(i, j)| pair(Variable::CompletedAngle(i), Variable::Action(j), if i == j { 1.0 } else { 0.0 }))
        .collect();

    let a = theta_sector_constant(sys);
    let mut c = Check::new(format!("{{xi_theta, sqrtL2}} = {a}"), tol);
    let mut rate = Check::new("{xi_r, H} = radial angle rate", tol);
    let mut forms = Check::new("arccos forms match carrier phases", 1e-10);
    for pt in &pts {
        let run = |id: ObservableId, which: usize| -> Result<f64, ClassicalError> {
            let g = variable_gradient(Variable::Angle(which), sys, pt, step)?;
            let f = crate::classical::gradient(id, sys, pt, None)?;
            Ok(bracket_from_gradients(&g, &f).re)
        };
        c.record_result(run(ObservableId::SqrtL2, 1).map(|v| (v - a).abs()));
        let want = radial_angle_rate(sys, sys.hamiltonian(pt));
        rate.record_result(run(ObservableId::H, 2).map(|v| (v - want).abs() / want.max(1.0)));
        forms.record_result(arccos_mismatch(sys, pt));
    }
    rep.extend([c, rate, forms]);
    rep.extend(completed);
    rep
}

/// Unwrapped values of `f` along `traj`. Where consecutive samples jump by
/// more than `π/2` the gap is refined by integrating to its midpoint, down
/// to `max_depth` bisections.
pub fn unwrap_along<F>(traj: &Trajectory, f: F, max_depth: u32) -> Result<Vec<f64>, ClassicalError>
where
    F: Fn(&PhasePoint) -> Result<f64, ClassicalError>,
{
    let mut out = Vec::with_capacity(traj.samples.len());
    let mut prev = f(traj.start())?;
    out.push(prev);
    for w in traj.samples.windows(2) {
        let next = bridge(traj, &f, &w[0].point, w[1].t - w[0].t, prev, max_depth)?;
        out.push(next);
        prev = next;
    }
    Ok(out)
}

fn bridge<F>(traj: &Trajectory, f: &F, a: &PhasePoint, dt: f64, va: f64, depth: u32) -> Result<f64, ClassicalError>
where
    F: Fn(&PhasePoint) -> Result<f64, ClassicalError>,
{
    let b = propagate(&traj.system, a, dt, traj.step, 3)?;
    let d = wrap(f(&b)? - va);
    if d.abs() <= std::f64::consts::FRAC_PI_2 {
        return Ok(va + d);
    }
    if depth == 0 {
        return Err(ClassicalError::InsufficientData(format!(
            "phase jumps by {d:.3} between samples; sampling too coarse"
        )));
    }
    let mid = propagate(&traj.system, a, dt / 2.0, traj.step, 3)?;
    let vm = bridge(traj, f, a, dt / 2.0, va, depth - 1)?;
    bridge(traj, f, &mid, dt / 2.0, vm, depth - 1)
}

/// Plain unwrap of an already sampled series: `|Δ| ≤ π` between neighbours.
pub fn unwrap(series: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(series.len());
    for (i, &v) in series.iter().enumerate() {
        if i == 0 {
            out.push(v);
        } else {
            let p = out[i - 1];
            out.push(p + wrap(v - p));
        }
    }
    out
}

/// Least-squares line `y = slope·t + intercept` and the largest residual.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
}

pub fn fit_line(t: &[f64], y: &[f64]) -> LineFit {
    let n = t.len() as f64;
    let tm = t.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let (mut sty, mut stt) = (0.0, 0.0);
    for (a, b) in t.iter().zip(y) {
        sty += (a - tm) * (b - ym);
        stt += (a - tm) * (a - tm);
    }
    let slope = if stt > 0.0 { sty / stt } else { 0.0 };
    let intercept = ym - slope * tm;
    let max_residual = t.iter().zip(y).map(|(a, b)| (b - slope * a - intercept).abs()).fold(0.0, f64::max);
    LineFit { slope, intercept, max_residual }
}

/// Action-angle history of an orbit.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitActions {
    pub t: Vec<f64>,
    pub j_phi: Vec<f64>,
    pub j_theta: Vec<f64>,
    pub j_r: Vec<f64>,
    pub xi_phi: Vec<f64>,
    pub xi_theta: Vec<f64>,
    pub xi_r: Vec<f64>,
    pub xi_r_fit: LineFit,
    /// `α(H)` or `2ω` at the initial energy.
    pub expected_rate: f64,
}

impl OrbitActions {
    /// Largest excursion from the initial value among the conserved members.
    pub fn max_constant_deviation(&self) -> f64 {
        [&self.j_phi, &self.j_theta, &self.j_r, &self.xi_phi, &self.xi_theta]
            .iter()
            .map(|s| s.iter().map(|v| (v - s[0]).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }
}

pub fn orbit_actions(traj: &Trajectory) -> Result<OrbitActions, ClassicalError> {
    let sys = traj.system;
    let t: Vec<f64> = traj.times().collect();
    let mut js = [Vec::new(), Vec::new(), Vec::new()];
    for p in traj.points() {
        let a = actions(&sys, p)?;
        for i in 0..3 {
            js[i].push(a[i]);
        }
    }
    let ang = |i: usize| unwrap_along(traj, move |p| Ok(angles(&sys, p)?[i]), 12);
    let (xi_phi, xi_theta, xi_r) = (ang(0)?, ang(1)?, ang(2)?);
    let xi_r_fit = fit_line(&t, &xi_r);
    let [j_phi, j_theta, j_r] = js;
    Ok(OrbitActions {
        expected_rate: radial_angle_rate(&sys, sys.hamiltonian(traj.start())),
        t,
        j_phi,
        j_theta,
        j_r,
        xi_phi,
        xi_theta,
        xi_r,
        xi_r_fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn phase_examples() {
        assert_eq!(phase_of(C64::new(1.0, 0.0)).unwrap(), 0.0);
        assert_eq!(phase_of(C64::new(0.0, 1.0)).unwrap(), FRAC_PI_2);
        assert_eq!(phase_of(C64::new(-1.0, -0.0)).unwrap(), PI);
        assert!(matches!(phase_of(C64::new(0.0, 0.0)), Err(ClassicalError::Degenerate(_))));
        let sys = SystemKind::kc(1.0).unwrap();
        let pt = PhasePoint::new(1.0, 0.0, FRAC_PI_2, 0.4, 0.0, 0.3).unwrap();
        let v = evaluate(ObservableId::ShiftTheta(Sign::Plus), &sys, &pt, None).unwrap();
        assert!((phase_of(v).unwrap() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn degenerate_anchors() {
        let kc = SystemKind::kc(1.0).unwrap();
        let a = actions(&kc, &kc.circular_point(1.0)).unwrap();
        assert!(a[2].abs() < 1e-12 && a[1].abs() < 1e-12 && a[0] == 1.0);
        let ho = SystemKind::ho(1.0).unwrap();
        let c = ho.circular_point(1.0);
        assert!(actions(&ho, &c).unwrap()[2].abs() < 1e-12);
        assert!(matches!(action_angles(&ho, &c), Err(ClassicalError::Degenerate(_))));
        let eq = PhasePoint::new(1.3, 0.4, FRAC_PI_2, 0.0, 0.0, -0.8).unwrap();
        assert_eq!(actions(&ho, &eq).unwrap()[1], 0.0);
        assert_eq!(actions(&kc, &eq).unwrap()[1], 0.0);
    }

    #[test]
    fn arccos_forms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for sys in [SystemKind::ho(1.2).unwrap(), SystemKind::kc(0.9).unwrap()] {
            for _ in 0..50 {
                let pt = random_nondegenerate_point(&sys, &mut rng);
                assert!(arccos_mismatch(&sys, &pt).unwrap() < 1e-10);
            }
        }
    }

    #[test]
    fn diagonal_brackets() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for sys in [SystemKind::ho(1.0).unwrap(), SystemKind::kc(1.0).unwrap()] {
            let pt = random_nondegenerate_point(&sys, &mut rng);
            for i in 0..3 {
                let b = variable_bracket(Variable::Angle(i), Variable::Action(i), &sys, &pt, 3e-5).unwrap();
                assert!((b - 1.0).abs() < 1e-6, "{} i={i} b={b}", sys.name());
            }
        }
    }

    #[test]
    fn line_fit_and_unwrap() {
        let t = [0.0, 1.0, 2.0, 3.0];
        let f = fit_line(&t, &[1.0, 3.0, 5.0, 7.0]);
        assert!((f.slope - 2.0).abs() < 1e-15 && f.max_residual < 1e-14);
        let u = unwrap(&[3.0, -3.0, -1.0]);
        assert!((u[1] - (std::f64::consts::TAU - 3.0)).abs() < 1e-12);
    }
}
