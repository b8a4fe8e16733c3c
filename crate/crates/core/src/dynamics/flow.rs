//! Hamilton's equations for `H = p_r² + V(r) + (p_θ² + p_φ²/sin²θ)/r²`.

use serde::Serialize;

use super::gauss::GaussLegendre;
use crate::classical::{ClassicalError, PhasePoint, SystemKind};

/// Abort thresholds for `r` and `sinθ`.
pub const SINGULAR_GUARD: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FlowControls {
    /// Output interval, also the first internal step.
    pub dt: f64,
    /// Bound on the relative energy drift.
    pub tolerance: f64,
    pub stages: usize,
    pub max_halvings: u32,
    /// Permit `H ≥ 0` for KC.
    pub allow_unbound: bool,
}

impl Default for FlowControls {
    fn default() -> Self {
        Self { dt: 0.01, tolerance: 1e-9, stages: 3, max_halvings: 8, allow_unbound: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub point: PhasePoint,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub system: SystemKind,
    pub samples: Vec<Sample>,
    /// Internal step actually used.
    pub step: f64,
    pub order: usize,
    pub tolerance: f64,
}

impl Trajectory {
    pub fn start(&self) -> &PhasePoint {
        &self.samples[0].point
    }

    pub fn duration(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.t)
    }

    pub fn points(&self) -> impl Iterator<Item = &PhasePoint> + '_ {
        self.samples.iter().map(|s| &s.point)
    }

    /// Maximum relative energy drift, relative to the size of the energy terms.
    pub fn energy_drift(&self) -> f64 {
        let h0 = self.system.hamiltonian(self.start());
        let scale = energy_scale(&self.system, self.start());
        self.points().map(|p| (self.system.hamiltonian(p) - h0).abs() / scale).fold(0.0, f64::max)
    }
}

pub(crate) fn energy_scale(sys: &SystemKind, pt: &PhasePoint) -> f64 {
    (pt.p_r * pt.p_r + sys.potential(pt.r).abs() + pt.l2() / (pt.r * pt.r)).max(1e-300)
}

/// Phase-space velocity `(∂H/∂p, -∂H/∂q)`.
pub fn vector_field(sys: &SystemKind, x: &[f64; 6]) -> [f64; 6] {
    let [r, pr, th, pth, _, pph] = *x;
    let (s, c) = th.sin_cos();
    let l2 = pth * pth + pph * pph / (s * s);
    let dv = match *sys {
        SystemKind::Ho { omega } => 0.5 * omega * omega * r,
        SystemKind::Kc { k } => k / (r * r),
    };
    let r2 = r * r;
    [
        2.0 * pr,
        -dv + 2.0 * l2 / (r2 * r),
        2.0 * pth / r2,
        2.0 * pph * pph * c / (r2 * s * s * s),
        2.0 * pph / (r2 * s * s),
        0.0,
    ]
}

fn check_guards(x: &[f64; 6], t: f64) -> Result<(), ClassicalError> {
    if !x.iter().all(|v| v.is_finite()) {
        return Err(ClassicalError::Integration(format!("non-finite state at t={t}")));
    }
    if x[0] < SINGULAR_GUARD || x[2].sin() < SINGULAR_GUARD {
        return Err(ClassicalError::Singular(format!(
            "r={:.3e}, sin theta={:.3e} below {SINGULAR_GUARD} at t={t}",
            x[0],
            x[2].sin()
        )));
    }
    Ok(())
}

/// State after time `t` (either sign) using steps no longer than `max_step`.
pub fn propagate(sys: &SystemKind, pt: &PhasePoint, t: f64, max_step: f64, stages: usize) -> Result<PhasePoint, ClassicalError> {
    let gl = GaussLegendre::new(stages).ok_or_else(|| ClassicalError::Invalid(format!("unsupported stage count {stages}")))?;
    let n = (t.abs() / max_step).ceil().max(1.0) as usize;
    let h = t / n as f64;
    let mut x = pt.to_array();
    for i in 0..n {
        x = gl
            .step(|y| vector_field(sys, y), &x, h)
            .map_err(|_| ClassicalError::Integration(format!("stage iteration diverged at t={}", i as f64 * h)))?;
        check_guards(&x, (i + 1) as f64 * h)?;
    }
    Ok(PhasePoint::from_array_unchecked(x))
}

/// Integrates from `pt0` over `[0, t_end]`, sampling every `ctrl.dt`. The
/// whole run is repeated with half the internal step until the energy drift
/// is below `ctrl.tolerance`.
pub fn hamilton_flow(pt0: &PhasePoint, sys: &SystemKind, t_end: f64, ctrl: &FlowControls) -> Result<Trajectory, ClassicalError> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(ClassicalError::Invalid(format!("duration must be positive, got {t_end}")));
    }
    if !(ctrl.dt > 0.0 && ctrl.dt.is_finite()) {
        return Err(ClassicalError::Invalid(format!("step must be positive, got {}", ctrl.dt)));
    }
    let pt0 = PhasePoint::from_array(pt0.to_array())?;
    check_guards(&pt0.to_array(), 0.0)?;
    if let SystemKind::Kc { .. } = sys {
        let h = sys.hamiltonian(&pt0);
        if h >= 0.0 && !ctrl.allow_unbound {
            return Err(ClassicalError::Domain(format!("KC motion with H={h} is unbound")));
        }
    }
    let gl = GaussLegendre::new(ctrl.stages)
        .ok_or_else(|| ClassicalError::Invalid(format!("unsupported stage count {}", ctrl.stages)))?;
    let n_out = (t_end / ctrl.dt).round().max(1.0) as usize;
    let h0 = sys.hamiltonian(&pt0);
    let scale = energy_scale(sys, &pt0);
    let mut last_err = None;
    for halving in 0..=ctrl.max_halvings {
        let sub = 1usize << halving;
        let h = ctrl.dt / sub as f64;
        match run(&gl, sys, &pt0, n_out, sub, h, ctrl.dt) {
            Ok(samples) => {
                let drift = samples.iter().map(|s| (sys.hamiltonian(&s.point) - h0).abs() / scale).fold(0.0, f64::max);
                if drift <= ctrl.tolerance {
                    return Ok(Trajectory { system: *sys, samples, step: h, order: gl.order(), tolerance: ctrl.tolerance });
                }
                last_err = Some(ClassicalError::Integration(format!("energy drift {drift:.3e} at step {h:.3e}")));
            }
            Err(e @ ClassicalError::Singular(_)) => return Err(e),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| ClassicalError::Integration("no attempt made".into())))
}

fn run(
    gl: &GaussLegendre,
    sys: &SystemKind,
    pt0: &PhasePoint,
    n_out: usize,
    sub: usize,
    h: f64,
    dt: f64,
) -> Result<Vec<Sample>, ClassicalError> {
    let mut samples = Vec::with_capacity(n_out + 1);
    samples.push(Sample { t: 0.0, point: *pt0 });
    let mut x = pt0.to_array();
    for i in 1..=n_out {
        for _ in 0..sub {
            x = gl
                .step(|y| vector_field(sys, y), &x, h)
                .map_err(|_| ClassicalError::Integration(format!("stage iteration diverged near t={}", i as f64 * dt)))?;
        }
        let t = i as f64 * dt;
        check_guards(&x, t)?;
        samples.push(Sample { t, point: PhasePoint::from_array_unchecked(x) });
    }
    Ok(samples)
}

/// Same position with all momenta reversed.
pub fn time_reversed(pt: &PhasePoint) -> PhasePoint {
    PhasePoint { p_r: -pt.p_r, p_theta: -pt.p_theta, p_phi: -pt.p_phi, ..*pt }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{gradient, ObservableId};

    #[test]
    fn vector_field_matches_gradient() {
        for sys in [SystemKind::ho(1.3).unwrap(), SystemKind::kc(0.7).unwrap()] {
            let pt = PhasePoint::new(1.1, 0.3, 0.9, -0.4, 2.0, 0.6).unwrap();
            let g = gradient(ObservableId::H, &sys, &pt, None).unwrap();
            let v = vector_field(&sys, &pt.to_array());
            for q in [0, 2, 4] {
                assert!((v[q] - g[q + 1].re).abs() < 1e-13);
                assert!((v[q + 1] + g[q].re).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn circular_kc_orbit_keeps_radius() {
        let kc = SystemKind::kc(1.0).unwrap();
        let pt = kc.circular_point(1.0);
        let period = std::f64::consts::TAU * 4.0 * 2.0;
        let traj = hamilton_flow(&pt, &kc, 10.0 * period, &FlowControls { dt: 0.05, ..Default::default() }).unwrap();
        let dr = traj.points().map(|p| (p.r - 2.0).abs()).fold(0.0, f64::max);
        assert!(dr < 1e-9, "{dr}");
        assert!(traj.energy_drift() < 1e-9);
    }

    #[test]
    fn unbound_kc_needs_opt_in() {
        let kc = SystemKind::kc(1.0).unwrap();
        let pt = PhasePoint::new(2.0, 1.0, 1.5, 0.0, 0.0, 1.0).unwrap();
        assert!(matches!(hamilton_flow(&pt, &kc, 1.0, &FlowControls::default()), Err(ClassicalError::Domain(_))));
        let ctrl = FlowControls { allow_unbound: true, ..Default::default() };
        assert!(hamilton_flow(&pt, &kc, 1.0, &ctrl).is_ok());
    }

    #[test]
    fn radial_plunge_hits_guard() {
        let kc = SystemKind::kc(1.0).unwrap();
        let pt = PhasePoint::new(1.0, -0.1, 1.5, 0.0, 0.0, 0.0).unwrap();
        let out = hamilton_flow(&pt, &kc, 5.0, &FlowControls::default());
        assert!(matches!(out, Err(ClassicalError::Singular(_)) | Err(ClassicalError::Integration(_))), "{out:?}");
    }

    #[test]
    fn time_reversal_returns() {
        let ho = SystemKind::ho(1.0).unwrap();
        let pt = PhasePoint::new(1.2, 0.4, 1.1, 0.3, 0.5, 0.7).unwrap();
        let fwd = propagate(&ho, &pt, 7.3, 0.01, 3).unwrap();
        let back = propagate(&ho, &time_reversed(&fwd), 7.3, 0.01, 3).unwrap();
        let back = time_reversed(&back);
        for (a, b) in back.to_array().iter().zip(pt.to_array()) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}
