//! Acceptance criteria 1-10, one line each. Runs without the libtest
//! harness so every verdict is printed even when an earlier one fails.

use std::f64::consts::FRAC_PI_2;
use std::sync::OnceLock;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use superfactor_core::action_angle::{actions, orbit_actions, verify_canonical_pairs};
use superfactor_core::classical::{random_orbit_start, PhasePoint, SystemKind, DEFAULT_STEP};
use superfactor_core::dynamics::{drift_report, hamilton_flow, radial_period, FlowControls, Trajectory, CONSERVED};
use superfactor_core::qm::angular::{eigen_residual as ylm_residual, spherical_harmonic};
use superfactor_core::qm::ho::{self, HoParams};
use superfactor_core::qm::kc::{self, KcParams};
use superfactor_core::suites::classical::{bracket_checks, modulus_checks, sample_points};
use superfactor_core::suites::quantum::QuantumSuite;
use superfactor_core::{Check, RadialFunction};

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn from_checks(checks: &[Check], extra: &str) -> Self {
        let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        let worst = checks
            .iter()
            .filter(|c| c.tolerance > 0.0)
            .map(|c| c.max_residual / c.tolerance)
            .fold(0.0, f64::max);
        let mut detail = format!("{} checks, worst residual/tolerance {worst:.2e}", checks.len());
        if !extra.is_empty() {
            detail = format!("{detail}; {extra}");
        }
        if !failed.is_empty() {
            detail = format!("{detail}; failing: {}", failed.join(" | "));
        }
        Self { pass: failed.is_empty(), detail }
    }
}

/// `-R'' - 2R'/r + ℓ(ℓ+1)R/r² + V R - E R` by central differences, relative to `|E R|`.
fn ode_residual(f: &RadialFunction, ell: i64, v: impl Fn(f64) -> f64, e: f64, r: f64) -> f64 {
    let h = 1e-3 * r.max(0.1);
    let g = |x: f64| f.eval(x).re;
    let (gm, g0, gp) = (g(r - h), g(r), g(r + h));
    let d2 = (gp - 2.0 * g0 + gm) / (h * h);
    let d1 = (gp - gm) / (2.0 * h);
    let lhs = -d2 - 2.0 * d1 / r + (ell * (ell + 1)) as f64 * g0 / (r * r) + v(r) * g0;
    let scale = (e * g0).abs() + d2.abs() + (2.0 * d1 / r).abs();
    (lhs - e * g0).abs() / scale.max(1e-300)
}

fn criterion_1() -> Verdict {
    let mut exact = Check::new("H_l psi = (w/2)(2n+3) psi", 1e-12);
    let mut ode = Check::new("radial equation by differences", 1e-5);
    for omega in [1.0, 2.0, 0.5] {
        let p = HoParams::new(omega).unwrap();
        for n in 0..=6i64 {
            let e = omega * (2 * n + 3) as f64 / 2.0;
            for ell in (n % 2..=n).step_by(2) {
                for m in -ell..=ell {
                    let st = match ho::build_state(n, ell, m, &p) {
                        Ok(s) => s,
                        Err(err) => {
                            exact.fail(err);
                            continue;
                        }
                    };
                    exact.record(ho::apply_hl(&st.radial, ell, &p).residual(&st.radial.scale_real(e)));
                    if m == 0 {
                        for r in [0.7, 1.3, 2.1] {
                            ode.record(ode_residual(&st.radial, ell, |x| 0.25 * omega * omega * x * x, e, r / omega.sqrt()));
                        }
                    }
                }
            }
        }
    }
    Verdict::from_checks(&[exact, ode], "")
}

fn criterion_2() -> Verdict {
    let mut exact = Check::new("H_l psi = -k^2/(4(n+1)^2) psi", 1e-12);
    let mut ode = Check::new("radial equation by differences", 1e-5);
    let mut deg = Check::new("enumerated states = (n+1)^2", 0.0);
    for k in [1.0, 2.0] {
        let p = KcParams::new(k).unwrap();
        for n in 0..=5i64 {
            let e = -k * k / (4.0 * ((n + 1) * (n + 1)) as f64);
            let mut count = 0i64;
            // One ℓ past the top to confirm the ladder stops there.
            for ell in 0..=n + 1 {
                for m in -ell..=ell {
                    let Ok(st) = kc::build_state(n, ell, m, &p) else { continue };
                    if st.is_zero() {
                        continue;
                    }
                    let res = kc::apply_hl(&st.radial, ell, &p).residual(&st.radial.scale_real(e));
                    exact.record(res);
                    if res <= 1e-12 {
                        count += 1;
                    }
                    if m == 0 {
                        for r in [0.5, 1.5, 4.0] {
                            ode.record(ode_residual(&st.radial, ell, |x| -k / x, e, r * (n + 1) as f64 / k));
                        }
                    }
                }
            }
            deg.record((count - (n + 1) * (n + 1)).abs() as f64);
        }
    }
    Verdict::from_checks(&[exact, ode, deg], "")
}

fn criterion_3() -> Verdict {
    let mut checks = Vec::new();
    let systems = [
        SystemKind::ho(1.0).unwrap(),
        SystemKind::ho(2.0).unwrap(),
        SystemKind::ho(0.5).unwrap(),
        SystemKind::kc(1.0).unwrap(),
        SystemKind::kc(2.0).unwrap(),
    ];
    for sys in systems {
        let rep = QuantumSuite::new(sys, 6, 5, 30, 11).run();
        checks.extend(rep.checks.into_iter().map(|mut c| {
            c.name = format!("{} {}: {}", sys.name(), sys.coupling(), c.name);
            c
        }));
        let rep = QuantumSuite::new(sys, 4, 3, 20, 12).exact(true).run();
        checks.extend(rep.checks.into_iter().map(|mut c| {
            c.name = format!("exact {} {}: {}", sys.name(), sys.coupling(), c.name);
            c
        }));
    }
    let exact_nonzero = checks.iter().filter(|c| c.name.starts_with("exact") && c.max_residual != 0.0).count();
    let mut v = Verdict::from_checks(&checks, &format!("exact-mode nonzero residuals: {exact_nonzero}"));
    if exact_nonzero > 0 {
        v.pass = false;
    }
    v
}

/// `P_ℓ^m(x) ∝ (1-x²)^{m/2} d^{ℓ+m}/dx^{ℓ+m} (x²-1)^ℓ`, evaluated directly.
fn rodrigues(ell: usize, m: usize, theta: f64) -> f64 {
    // Coefficients of (x² - 1)^ℓ by the binomial theorem.
    let mut c = vec![0.0f64; 2 * ell + 1];
    let mut binom = 1.0;
    for j in 0..=ell {
        c[2 * j] = binom * if (ell - j) % 2 == 0 { 1.0 } else { -1.0 };
        binom = binom * (ell - j) as f64 / (j + 1) as f64;
    }
    for _ in 0..ell + m {
        c = (1..c.len()).map(|i| c[i] * i as f64).collect();
        if c.is_empty() {
            return 0.0;
        }
    }
    let x = theta.cos();
    let poly = c.iter().rev().fold(0.0, |acc, a| acc * x + a);
    theta.sin().powi(m as i32) * poly
}

fn criterion_4() -> Verdict {
    let mut eig = Check::new("L2 Y = l(l+1) Y", 1e-12);
    let mut oracle = Check::new("Y proportional to Rodrigues oracle", 1e-12);
    let thetas = [0.3, 0.7, 1.1, 1.6, 2.2, 2.9];
    for ell in 0..=5i64 {
        for m in -ell..=ell {
            let y = match spherical_harmonic::<f64>(ell, m, true) {
                Ok(y) => y,
                Err(e) => {
                    eig.fail(e);
                    continue;
                }
            };
            eig.record_result(ylm_residual(&y));
            let ratios: Vec<_> =
                thetas.iter().map(|&t| y.theta.eval(t) / rodrigues(ell as usize, m.unsigned_abs() as usize, t)).collect();
            let spread = ratios.iter().map(|r| (r - ratios[0]).norm()).fold(0.0, f64::max) / ratios[0].norm();
            oracle.record(spread);
            if y.mode.m != m {
                oracle.fail(format!("mode {} carries m={m}", y.mode.m));
            }
        }
    }
    Verdict::from_checks(&[eig, oracle], "")
}

fn systems() -> [SystemKind; 4] {
    [SystemKind::ho(1.0).unwrap(), SystemKind::ho(2.0).unwrap(), SystemKind::kc(1.0).unwrap(), SystemKind::kc(2.0).unwrap()]
}

fn prefixed(sys: &SystemKind, checks: Vec<Check>) -> Vec<Check> {
    checks
        .into_iter()
        .map(|mut c| {
            c.name = format!("{} {}: {}", sys.name(), sys.coupling(), c.name);
            c
        })
        .collect()
}

fn criterion_5() -> Verdict {
    let mut checks = Vec::new();
    for sys in systems() {
        let pts = sample_points(&sys, 500, 5);
        checks.extend(prefixed(&sys, modulus_checks(&sys, &pts, 1e-10)));
    }
    Verdict::from_checks(&checks, "500 points per system")
}

fn criterion_6() -> Verdict {
    let mut checks = Vec::new();
    for sys in systems() {
        let pts = sample_points(&sys, 200, 6);
        checks.extend(prefixed(&sys, bracket_checks(&sys, &pts, DEFAULT_STEP, 1e-6)));
    }
    Verdict::from_checks(&checks, "200 points per system")
}

struct Orbit {
    sys: SystemKind,
    traj: Trajectory,
    period: f64,
}

/// 20 bound orbits per system over ten radial periods, 400 samples per
/// period. The energy bound is tightened to 1e-11 so that the Runge-Lenz
/// and Fradkin components, which are not part of the step control, keep a
/// margin below 1e-8.
fn orbits() -> &'static Result<Vec<Orbit>, String> {
    static ORBITS: OnceLock<Result<Vec<Orbit>, String>> = OnceLock::new();
    ORBITS.get_or_init(|| {
        let mut out = Vec::new();
        for sys in [SystemKind::ho(1.0).unwrap(), SystemKind::kc(1.0).unwrap()] {
            let mut rng = ChaCha8Rng::seed_from_u64(77);
            for _ in 0..20 {
                let pt = random_orbit_start(&sys, &mut rng);
                let period = sys.radial_period(sys.hamiltonian(&pt)).ok_or("unbound start")?;
                let ctrl = FlowControls { dt: period / 400.0, tolerance: 1e-11, ..FlowControls::default() };
                let traj = hamilton_flow(&pt, &sys, 10.0 * period, &ctrl).map_err(|e| e.to_string())?;
                out.push(Orbit { sys, traj, period });
            }
        }
        Ok(out)
    })
}

fn criterion_7() -> Verdict {
    let orbits = match orbits() {
        Ok(o) => o,
        Err(e) => return Verdict { pass: false, detail: e.clone() },
    };
    let mut checks = Vec::new();
    for label in ["ho", "kc"] {
        let mut c = Check::new(format!("{label} drift of H, L2, Lz, Xsym, Xanti"), 1e-8);
        for o in orbits.iter().filter(|o| o.sys.name() == label) {
            c.record_result(drift_report(&o.traj, &CONSERVED).map(|d| d.max_drift()));
        }
        checks.push(c);
    }
    Verdict::from_checks(&checks, &format!("{} orbits of 10 radial periods", orbits.len()))
}

fn criterion_8() -> Verdict {
    let orbits = match orbits() {
        Ok(o) => o,
        Err(e) => return Verdict { pass: false, detail: e.clone() },
    };
    let mut checks = Vec::new();
    for label in ["ho", "kc"] {
        let mut c = Check::new(format!("{label} measured radial period"), 1e-6);
        for o in orbits.iter().filter(|o| o.sys.name() == label).take(5) {
            c.record_result(radial_period(&o.traj).map(|t| (t - o.period).abs() / o.period));
        }
        checks.push(c);
    }
    Verdict::from_checks(&checks, "5 orbits per system")
}

fn criterion_9() -> Verdict {
    let mut checks = Vec::new();
    let mut completed_ok = true;
    for sys in [SystemKind::ho(1.0).unwrap(), SystemKind::kc(1.0).unwrap()] {
        let rep = verify_canonical_pairs(&sys, 100, 9, DEFAULT_STEP, 1e-5);
        // Only the pairs named by the criterion count; the completed angles
        // are reported alongside as a diagnostic.
        completed_ok &= rep.checks.iter().filter(|c| c.name.starts_with("{xi'_")).all(|c| c.passed);
        let named = rep.checks.into_iter().filter(|c| c.name.starts_with("{xi_") || c.name.starts_with("{J_"));
        checks.extend(prefixed(&sys, named.filter(|c| !c.name.contains("sqrtL2") && !c.name.contains(", H}")).collect()));
    }
    let note = format!(
        "100 points per system; completed angles xi' canonical: {}",
        if completed_ok { "yes" } else { "no" }
    );
    match orbits() {
        Ok(orbits) => {
            for label in ["ho", "kc"] {
                let mut constant = Check::new(format!("{label} xi_phi, xi_theta and actions constant on orbits"), 1e-6);
                let mut slope = Check::new(format!("{label} xi_r slope = alpha(H) or 2 omega"), 1e-6);
                let mut fit = Check::new(format!("{label} xi_r linear fit residual"), 1e-6);
                for o in orbits.iter().filter(|o| o.sys.name() == label).take(5) {
                    match orbit_actions(&o.traj) {
                        Ok(a) => {
                            constant.record(a.max_constant_deviation());
                            slope.record((a.xi_r_fit.slope - a.expected_rate).abs() / a.expected_rate);
                            fit.record(a.xi_r_fit.max_residual);
                        }
                        Err(e) => constant.fail(e),
                    }
                }
                checks.extend([constant, slope, fit]);
            }
        }
        Err(e) => {
            let mut c = Check::new("orbits", 0.0);
            c.fail(e);
            checks.push(c);
        }
    }
    Verdict::from_checks(&checks, &note)
}

fn criterion_10() -> Verdict {
    let mut jr = Check::new("J_r = 0 on circular orbits", 1e-12);
    let mut jt = Check::new("J_theta = 0 on equatorial orbits", 1e-12);
    for sys in systems() {
        for ell in [0.3, 1.0, 2.5, 7.0] {
            jr.record_result(actions(&sys, &sys.circular_point(ell)).map(|a| a[2].abs()));
        }
        for (r, p_r, m) in [(1.3, 0.4, -0.8), (0.9, -0.2, 1.7), (2.4, 0.05, 0.6)] {
            let pt = PhasePoint::new(r, p_r, FRAC_PI_2, 0.0, 1.0, m).unwrap();
            if let SystemKind::Kc { .. } = sys {
                if sys.hamiltonian(&pt) >= 0.0 {
                    continue;
                }
            }
            jt.record_result(actions(&sys, &pt).map(|a| a[1].abs()));
        }
    }
    Verdict::from_checks(&[jr, jt], "")
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("HO spectrum", criterion_1),
        ("KC spectrum and degeneracy", criterion_2),
        ("operator identities", criterion_3),
        ("spherical harmonics", criterion_4),
        ("classical modulus table", criterion_5),
        ("classical brackets", criterion_6),
        ("conservation along orbits", criterion_7),
        ("radial frequencies", criterion_8),
        ("action-angle variables", criterion_9),
        ("degenerate anchors", criterion_10),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let secs = start.elapsed().as_secs_f64();
        println!("criterion {:>2} {}: {title} [{secs:.2}s] {}", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
        failed += usize::from(!v.pass);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
