//! Post-processing of trajectories: drift of conserved quantities, radial
//! period and orbit classification.

use serde::Serialize;

use super::flow::{energy_scale, propagate, vector_field, Trajectory};
use crate::classical::{evaluate, ClassicalError, ObservableId, PhasePoint, SystemKind};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DriftEntry {
    pub observable: String,
    pub initial: f64,
    /// Size of the terms making up the observable at `t = 0`.
    pub scale: f64,
    pub max_relative_drift: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DriftReport {
    pub entries: Vec<DriftEntry>,
}

impl DriftReport {
    pub fn max_drift(&self) -> f64 {
        self.entries.iter().map(|e| e.max_relative_drift).fold(0.0, f64::max)
    }

    pub fn get(&self, label: &str) -> Option<&DriftEntry> {
        self.entries.iter().find(|e| e.observable == label)
    }
}

/// The five independent constants of either system.
pub const CONSERVED: [ObservableId; 5] =
    [ObservableId::H, ObservableId::L2, ObservableId::Lz, ObservableId::XSym, ObservableId::XAnti];

fn real(id: ObservableId, sys: &SystemKind, pt: &PhasePoint) -> Result<f64, ClassicalError> {
    Ok(evaluate(id, sys, pt, None)?.re)
}

fn norm3(v: [f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Scale against which drift of `id` is measured: the sum of magnitudes of
/// the terms that cancel into the observable.
pub fn natural_scale(id: ObservableId, sys: &SystemKind, pt: &PhasePoint) -> Result<f64, ClassicalError> {
    use ObservableId::*;
    let l2 = pt.l2();
    let v = |id| real(id, sys, pt);
    let s = match (id, *sys) {
        (H, _) => energy_scale(sys, pt),
        (L2, _) => l2,
        (Lz, _) => l2.sqrt(),
        (XSym, SystemKind::Ho { .. }) => {
            (l2 - pt.p_phi * pt.p_phi) * energy_scale(sys, pt) + 2.0 * l2 * v(Fradkin(2, 2))?.abs()
        }
        (XAnti, SystemKind::Ho { .. }) => 2.0 * (v(AngMom(0))?.abs() * v(Fradkin(1, 2))?.abs() + v(AngMom(1))?.abs() * v(Fradkin(2, 0))?.abs()),
        (XSym, SystemKind::Kc { .. }) => norm3([v(RungeLenz(0))?, v(RungeLenz(1))?, v(RungeLenz(2))?]),
        (XAnti, SystemKind::Kc { .. }) => l2.sqrt() * norm3([v(RungeLenz(0))?, v(RungeLenz(1))?, v(RungeLenz(2))?]),
        _ => v(id)?.abs(),
    };
    Ok(s.max(1e-300))
}

pub fn drift_report(traj: &Trajectory, observables: &[ObservableId]) -> Result<DriftReport, ClassicalError> {
    let sys = &traj.system;
    let pt0 = traj.start();
    let mut entries = Vec::with_capacity(observables.len());
    for &id in observables {
        let initial = real(id, sys, pt0)?;
        let scale = natural_scale(id, sys, pt0)?;
        let mut worst = 0.0f64;
        for p in traj.points() {
            worst = worst.max((real(id, sys, p)? - initial).abs() / scale);
        }
        entries.push(DriftEntry { observable: id.label(), initial, scale, max_relative_drift: worst });
    }
    Ok(DriftReport { entries })
}

/// Radial excursion relative to the mean radius below which an orbit counts as circular.
pub const CIRCULAR_REL: f64 = 1e-8;

/// Turning point of `r(t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TurningPoint {
    pub t: f64,
    pub r: f64,
    /// Pericentre (`p_r` turns from negative to positive) or apocentre.
    pub minimum: bool,
}

fn is_circular(traj: &Trajectory) -> bool {
    let (lo, hi) = traj.points().fold((f64::INFINITY, 0.0f64), |(lo, hi), p| (lo.min(p.r), hi.max(p.r)));
    hi - lo <= CIRCULAR_REL * 0.5 * (hi + lo)
}

/// Zeros of `p_r` located between samples and refined by Newton steps
/// that re-integrate from the preceding sample.
pub fn turning_points(traj: &Trajectory) -> Result<Vec<TurningPoint>, ClassicalError> {
    if is_circular(traj) {
        return Ok(Vec::new());
    }
    let sys = &traj.system;
    let mut out = Vec::new();
    for w in traj.samples.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let (pa, pb) = (a.point.p_r, b.point.p_r);
        if pa == 0.0 || pa.signum() == pb.signum() {
            continue;
        }
        let dt = b.t - a.t;
        let mut tau = dt * pa / (pa - pb);
        for _ in 0..8 {
            let pt = propagate(sys, &a.point, tau, traj.step, 3)?;
            let dp = vector_field(sys, &pt.to_array())[1];
            if dp == 0.0 {
                break;
            }
            let delta = pt.p_r / dp;
            tau -= delta;
            if delta.abs() < 1e-15 * dt.max(1.0) {
                break;
            }
        }
        if tau > 0.0 && tau <= dt * (1.0 + 1e-9) {
            let pt = propagate(sys, &a.point, tau, traj.step, 3)?;
            out.push(TurningPoint { t: a.t + tau, r: pt.r, minimum: pa < 0.0 });
        }
    }
    Ok(out)
}

/// Period of `r(t)` from spacing of like turning points.
pub fn radial_period(traj: &Trajectory) -> Result<f64, ClassicalError> {
    let tps = turning_points(traj)?;
    if tps.len() < 3 {
        return Err(ClassicalError::InsufficientData(format!("{} radial turning points, need at least 3", tps.len())));
    }
    let kind = tps[0].minimum;
    let same: Vec<f64> = tps.iter().filter(|t| t.minimum == kind).map(|t| t.t).collect();
    Ok((same[same.len() - 1] - same[0]) / (same.len() - 1) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum OrbitClass {
    Closed { period: f64 },
    Open,
    Circular,
}

/// Recurrence tolerance in every coordinate.
pub const CLOSURE_TOL: f64 = 1e-5;

fn distance(a: &PhasePoint, b: &PhasePoint) -> f64 {
    let xa = a.to_array();
    let xb = b.to_array();
    (0..6)
        .map(|i| {
            let d = xa[i] - xb[i];
            if i == 4 {
                let w = d.rem_euclid(std::f64::consts::TAU);
                w.min(std::f64::consts::TAU - w)
            } else {
                d.abs()
            }
        })
        .fold(0.0, f64::max)
}

/// Closed iff the start recurs within [`CLOSURE_TOL`] at a whole number of
/// radial periods inside the trajectory.
pub fn classify_orbit(traj: &Trajectory) -> Result<OrbitClass, ClassicalError> {
    if is_circular(traj) {
        return Ok(OrbitClass::Circular);
    }
    let sys = &traj.system;
    if let SystemKind::Kc { .. } = sys {
        if sys.hamiltonian(traj.start()) >= 0.0 {
            return Ok(OrbitClass::Open);
        }
    }
    let period = match radial_period(traj) {
        Ok(p) => p,
        Err(ClassicalError::InsufficientData(_)) => return Ok(OrbitClass::Open),
        Err(e) => return Err(e),
    };
    let total = traj.duration();
    let mut j = 1;
    while j as f64 * period <= total {
        let t = j as f64 * period;
        let back = propagate(sys, traj.start(), t, traj.step, 3)?;
        if distance(&back, traj.start()) <= CLOSURE_TOL {
            return Ok(OrbitClass::Closed { period: t });
        }
        j += 1;
    }
    Ok(OrbitClass::Open)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{hamilton_flow, FlowControls};

    #[test]
    fn ho_one_dimensional_period() {
        let ho = SystemKind::ho(1.0).unwrap();
        let pt = PhasePoint::new(1.5, 0.0, std::f64::consts::FRAC_PI_2, 0.0, 0.0, 1e-3).unwrap();
        let traj = hamilton_flow(&pt, &ho, 12.0, &FlowControls::default()).unwrap();
        let p = radial_period(&traj).unwrap();
        assert!((p - std::f64::consts::PI).abs() < 1e-6, "{p}");
    }

    #[test]
    fn kc_period_and_closure() {
        let kc = SystemKind::kc(1.0).unwrap();
        let pt = PhasePoint::new(1.0, 0.3, 1.2, 0.2, 0.0, 0.5).unwrap();
        let e = kc.hamiltonian(&pt);
        let want = kc.radial_period(e).unwrap();
        let traj = hamilton_flow(&pt, &kc, 3.5 * want, &FlowControls { dt: 0.02, ..Default::default() }).unwrap();
        assert!((radial_period(&traj).unwrap() / want - 1.0).abs() < 1e-6);
        match classify_orbit(&traj).unwrap() {
            OrbitClass::Closed { period } => assert!((period / want - 1.0).abs() < 1e-6),
            other => panic!("{other:?}"),
        }
        let rep = drift_report(&traj, &CONSERVED).unwrap();
        assert!(rep.max_drift() < 1e-9, "{rep:?}");
    }

    #[test]
    fn circular_and_open() {
        let kc = SystemKind::kc(1.0).unwrap();
        let traj = hamilton_flow(&kc.circular_point(1.0), &kc, 60.0, &FlowControls { dt: 0.05, ..Default::default() }).unwrap();
        assert_eq!(classify_orbit(&traj).unwrap(), OrbitClass::Circular);
        assert!(matches!(radial_period(&traj), Err(ClassicalError::InsufficientData(_))));
        let pt = PhasePoint::new(2.0, 1.0, 1.5, 0.0, 0.0, 1.0).unwrap();
        let ctrl = FlowControls { allow_unbound: true, ..Default::default() };
        let traj = hamilton_flow(&pt, &kc, 20.0, &ctrl).unwrap();
        assert_eq!(classify_orbit(&traj).unwrap(), OrbitClass::Open);
    }

    #[test]
    fn ho_closes_after_two_radial_periods() {
        let ho = SystemKind::ho(2.0).unwrap();
        let pt = PhasePoint::new(0.8, 0.3, 1.0, 0.4, 0.3, 0.6).unwrap();
        let traj = hamilton_flow(&pt, &ho, 5.0, &FlowControls::default()).unwrap();
        match classify_orbit(&traj).unwrap() {
            OrbitClass::Closed { period } => assert!((period - std::f64::consts::PI).abs() < 1e-6, "{period}"),
            other => panic!("{other:?}"),
        }
    }
}
