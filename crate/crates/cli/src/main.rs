//! `superfactor`: verification suites, spectra, harmonics, orbits and
//! action-angle reports on the command line.
//!
//! Exit status is 0 when every check is within tolerance, 1 when a check
//! fails and 2 for usage or input errors.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use superfactor_core::action_angle::orbit_actions;
use superfactor_core::classical::{evaluate, ObservableId, PhasePoint, SystemKind};
use superfactor_core::dynamics::{drift_report, hamilton_flow, FlowControls, Sample, Trajectory, CONSERVED};
use superfactor_core::qm::angular::{eigen_residual as harmonic_residual, spherical_harmonic, AngularPair};
use superfactor_core::qm::{ho, kc};
use superfactor_core::report::SCHEMA;
use superfactor_core::suites::classical::{ClassicalSuite, Tolerances};
use superfactor_core::suites::quantum::{QuantumSuite, QuantumTolerances};
use superfactor_core::Check;

const SEED_ENV: &str = "SUPERFACTOR_SEED";

#[derive(Parser, Debug)]
#[command(name = "superfactor", version, about = "Factorization-method symmetries of the oscillator and Kepler-Coulomb systems")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite and print its JSON report.
    #[command(subcommand)]
    Verify(Suite),
    /// Energy table of the generated eigenstates.
    #[command(subcommand)]
    Spectrum(Spectrum),
    /// Generated spherical harmonics with their eigenvalue residuals.
    Harmonics(HarmonicsArgs),
    /// Integrate an orbit to CSV with a JSON drift sidecar.
    Orbit(OrbitArgs),
    /// Action-angle history of an orbit CSV.
    Actions(ActionsArgs),
}

#[derive(Subcommand, Debug)]
enum Suite {
    Quantum(QuantumArgs),
    Classical(ClassicalArgs),
}

#[derive(Subcommand, Debug)]
enum Spectrum {
    Ho {
        #[arg(long, default_value = "1", value_parser = positive)]
        omega: f64,
        #[arg(long, default_value_t = 6)]
        nmax: u32,
        #[arg(long, default_value = "0.000000000001", value_parser = non_negative)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
    Kc {
        #[arg(long, default_value = "1", value_parser = positive)]
        k: f64,
        #[arg(long, default_value_t = 5)]
        nmax: u32,
        #[arg(long, default_value = "0.000000000001", value_parser = non_negative)]
        tol: f64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SystemName {
    Ho,
    Kc,
}

#[derive(Args, Debug)]
struct SystemArgs {
    #[arg(long, value_enum)]
    system: SystemName,
    /// Oscillator frequency.
    #[arg(long, default_value = "1", value_parser = positive)]
    omega: f64,
    /// Kepler-Coulomb coupling.
    #[arg(long, default_value = "1", value_parser = positive)]
    k: f64,
}

impl SystemArgs {
    fn kind(&self) -> SystemKind {
        match self.system {
            SystemName::Ho => SystemKind::Ho { omega: self.omega },
            SystemName::Kc => SystemKind::Kc { k: self.k },
        }
    }
}

#[derive(Args, Debug)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct QuantumArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long, default_value_t = 6)]
    nmax: u32,
    #[arg(long, default_value_t = 4)]
    lmax: u32,
    /// Random functions per identity.
    #[arg(long, default_value_t = 30)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Rational arithmetic; every residual must vanish.
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value = "0.000000000001", value_parser = non_negative)]
    tol_spectrum: f64,
    #[arg(long, default_value = "0.0000000001", value_parser = non_negative)]
    tol_identity: f64,
    #[arg(long, default_value = "0.000000000001", value_parser = non_negative)]
    tol_harmonic: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct ClassicalArgs {
    #[command(flatten)]
    system: SystemArgs,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Finite-difference step of the bracket oracle.
    #[arg(long, default_value = "0.00003", value_parser = positive)]
    step: f64,
    #[arg(long, default_value = "0.0000000001", value_parser = non_negative)]
    tol_modulus: f64,
    #[arg(long, default_value = "0.000001", value_parser = non_negative)]
    tol_bracket: f64,
    #[arg(long, default_value = "0.00000001", value_parser = non_negative)]
    tol_conserved: f64,
    #[arg(long, default_value = "0.0000001", value_parser = non_negative)]
    tol_gradient: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct HarmonicsArgs {
    #[arg(long, default_value_t = 5)]
    lmax: u32,
    #[arg(long, default_value = "0.000000000001", value_parser = non_negative)]
    tol: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct OrbitArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// Initial point `r,p_r,theta,p_theta,phi,p_phi`.
    #[arg(long, value_parser = point)]
    init: [f64; 6],
    #[arg(long, value_parser = positive)]
    time: f64,
    /// Output interval.
    #[arg(long, default_value = "0.01", value_parser = positive)]
    dt: f64,
    /// Bound on the relative energy drift.
    #[arg(long, default_value = "0.000000001", value_parser = positive)]
    tolerance: f64,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=3))]
    stages: u32,
    #[arg(long, default_value_t = 8)]
    max_halvings: u32,
    /// Allow KC starts with H >= 0.
    #[arg(long)]
    allow_unbound: bool,
    /// Drift report path; defaults to `<out>.drift.json`, or stderr without `--out`.
    #[arg(long)]
    drift: Option<PathBuf>,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct ActionsArgs {
    #[command(flatten)]
    system: SystemArgs,
    /// CSV written by `superfactor orbit`.
    #[arg(long)]
    orbit: PathBuf,
    /// Tolerance on the constancy of the actions, `xi_phi` and `xi_theta`.
    #[arg(long, default_value = "0.000001", value_parser = non_negative)]
    tol_constant: f64,
    /// Tolerance on the `xi_r` slope (relative) and its fit residual.
    #[arg(long, default_value = "0.000001", value_parser = non_negative)]
    tol_slope: f64,
    #[command(flatten)]
    out: Output,
}

/// Plain decimal notation: optional sign, digits, optional fraction.
fn decimal(s: &str) -> Result<f64, String> {
    let body = s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s);
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
    let bad_dot = body.contains('.') && frac.is_empty();
    if int.is_empty() && frac.is_empty() || bad_dot || !digits(int) || !digits(frac) {
        return Err(format!("`{s}` is not a decimal number"));
    }
    s.parse().map_err(|_| format!("`{s}` is not a decimal number"))
}

fn positive(s: &str) -> Result<f64, String> {
    match decimal(s)? {
        v if v > 0.0 => Ok(v),
        v => Err(format!("expected a positive value, got {v}")),
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    match decimal(s)? {
        v if v >= 0.0 => Ok(v),
        v => Err(format!("expected a non-negative value, got {v}")),
    }
}

fn point(s: &str) -> Result<[f64; 6], String> {
    let v: Vec<f64> = s.split(',').map(|p| decimal(p.trim())).collect::<Result<_, _>>()?;
    v.try_into().map_err(|v: Vec<f64>| format!("expected 6 comma-separated values, got {}", v.len()))
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl From<superfactor_core::classical::ClassicalError> for CliError {
    fn from(e: superfactor_core::classical::ClassicalError) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Passed or failed verification; errors are separate.
type Outcome = Result<bool, CliError>;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

fn emit(out: &Output, bytes: &[u8]) -> Result<(), CliError> {
    match &out.out {
        Some(p) => fs::write(p, bytes).map_err(io_err(p)),
        None => io::stdout().lock().write_all(bytes).map_err(io_err(Path::new("<stdout>"))),
    }
}

fn emit_json<T: Serialize>(out: &Output, value: &T) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    emit(out, s.as_bytes())
}

fn seed_override(seed: u64) -> Result<u64, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("{SEED_ENV}={v} is not a non-negative integer"))),
        Err(std::env::VarError::NotPresent) => Ok(seed),
        Err(e) => Err(CliError::Usage(format!("{SEED_ENV}: {e}"))),
    }
}

fn verify_quantum(a: &QuantumArgs) -> Outcome {
    let mut suite = QuantumSuite::new(a.system.kind(), a.nmax as i64, a.lmax as i64, a.samples, seed_override(a.seed)?)
        .exact(a.exact);
    suite.tol = QuantumTolerances { spectrum: a.tol_spectrum, identity: a.tol_identity, harmonic: a.tol_harmonic };
    let rep = suite.run();
    emit_json(&a.out, &rep)?;
    Ok(rep.passed)
}

fn verify_classical(a: &ClassicalArgs) -> Outcome {
    let mut suite = ClassicalSuite::new(a.system.kind(), a.samples, seed_override(a.seed)?);
    suite.step = a.step;
    suite.tol = Tolerances {
        modulus: a.tol_modulus,
        bracket: a.tol_bracket,
        conserved: a.tol_conserved,
        gradient: a.tol_gradient,
    };
    let rep = suite.run();
    emit_json(&a.out, &rep)?;
    Ok(rep.passed)
}

#[derive(Serialize)]
struct HoLevel {
    n: i64,
    ell: i64,
    energy: f64,
    states: usize,
    residual: f64,
}

#[derive(Serialize)]
struct KcLevel {
    n: i64,
    energy: f64,
    residual: f64,
    degeneracy: usize,
}

#[derive(Serialize)]
struct Table<T> {
    schema: &'static str,
    system: &'static str,
    parameters: std::collections::BTreeMap<&'static str, f64>,
    tolerance: f64,
    levels: Vec<T>,
    passed: bool,
}

fn spectrum(s: &Spectrum) -> Outcome {
    match *s {
        Spectrum::Ho { omega, nmax, tol, ref out } => {
            let p = ho::HoParams::new(omega).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut levels = Vec::new();
            for n in 0..=nmax as i64 {
                for ell in (n % 2..=n).step_by(2) {
                    let mut residual: f64 = 0.0;
                    for m in -ell..=ell {
                        let st = ho::build_state(n, ell, m, &p).map_err(|e| CliError::Usage(e.to_string()))?;
                        residual = residual.max(ho::eigen_residual(&st, &p));
                    }
                    levels.push(HoLevel { n, ell, energy: ho::energy(n, &p), states: (2 * ell + 1) as usize, residual });
                }
            }
            let passed = levels.iter().all(|l| l.residual <= tol);
            let parameters = [("omega", omega), ("nmax", nmax as f64)].into_iter().collect();
            emit_json(out, &Table { schema: SCHEMA, system: "ho", parameters, tolerance: tol, levels, passed })?;
            Ok(passed)
        }
        Spectrum::Kc { k, nmax, tol, ref out } => {
            let p = kc::KcParams::new(k).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut levels = Vec::new();
            let mut passed = true;
            for n in 0..=nmax as i64 {
                let mut residual: f64 = 0.0;
                for ell in 0..=n {
                    for m in -ell..=ell {
                        let st = kc::build_state(n, ell, m, &p).map_err(|e| CliError::Usage(e.to_string()))?;
                        residual = residual.max(kc::eigen_residual(&st, &p));
                    }
                }
                let degeneracy = kc::degeneracy(n, &p).map_err(|e| CliError::Usage(e.to_string()))?;
                passed &= residual <= tol && degeneracy as i64 == (n + 1) * (n + 1);
                levels.push(KcLevel { n, energy: kc::energy(n, &p), residual, degeneracy });
            }
            let parameters = [("k", k), ("nmax", nmax as f64)].into_iter().collect();
            emit_json(out, &Table { schema: SCHEMA, system: "kc", parameters, tolerance: tol, levels, passed })?;
            Ok(passed)
        }
    }
}

#[derive(Serialize)]
struct Harmonic {
    #[serde(flatten)]
    pair: AngularPair,
    norm: f64,
    residual: f64,
}

#[derive(Serialize)]
struct HarmonicTable {
    schema: &'static str,
    lmax: u32,
    tolerance: f64,
    harmonics: Vec<Harmonic>,
    passed: bool,
}

fn harmonics(a: &HarmonicsArgs) -> Outcome {
    let mut out = Vec::new();
    for ell in 0..=a.lmax as i64 {
        for m in -ell..=ell {
            let pair = spherical_harmonic::<f64>(ell, m, true).map_err(|e| CliError::Usage(e.to_string()))?;
            let residual = harmonic_residual(&pair).unwrap_or(f64::INFINITY);
            out.push(Harmonic { norm: pair.norm_sq(), residual, pair });
        }
    }
    let passed = out.iter().all(|h| h.residual <= a.tol);
    emit_json(&a.out, &HarmonicTable { schema: SCHEMA, lmax: a.lmax, tolerance: a.tol, harmonics: out, passed })?;
    Ok(passed)
}

/// One CSV row; `phi` is wrapped to `[0, 2π)` on export.
#[derive(Serialize, Deserialize)]
struct Row {
    t: f64,
    r: f64,
    p_r: f64,
    theta: f64,
    p_theta: f64,
    phi: f64,
    p_phi: f64,
    #[serde(rename = "H")]
    h: f64,
    #[serde(rename = "L2")]
    l2: f64,
    #[serde(rename = "Lz")]
    lz: f64,
    #[serde(rename = "Xsym")]
    xsym: f64,
    #[serde(rename = "Xanti")]
    xanti: f64,
}

#[derive(Serialize)]
struct DriftSidecar<'a> {
    schema: &'static str,
    system: SystemKind,
    init: [f64; 6],
    time: f64,
    dt: f64,
    step: f64,
    order: usize,
    energy_drift: f64,
    drift: &'a superfactor_core::dynamics::DriftReport,
}

fn orbit(a: &OrbitArgs) -> Outcome {
    let sys = a.system.kind();
    let pt = PhasePoint::from_array(a.init)?;
    let ctrl = FlowControls {
        dt: a.dt,
        tolerance: a.tolerance,
        stages: a.stages as usize,
        max_halvings: a.max_halvings,
        allow_unbound: a.allow_unbound,
    };
    let traj = hamilton_flow(&pt, &sys, a.time, &ctrl)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for s in &traj.samples {
        let p = s.point.wrapped();
        let ev = |id| evaluate(id, &sys, &s.point, None).map(|z| z.re);
        w.serialize(Row {
            t: s.t,
            r: p.r,
            p_r: p.p_r,
            theta: p.theta,
            p_theta: p.p_theta,
            phi: p.phi,
            p_phi: p.p_phi,
            h: sys.hamiltonian(&p),
            l2: p.l2(),
            lz: p.lz(),
            xsym: ev(ObservableId::XSym)?,
            xanti: ev(ObservableId::XAnti)?,
        })?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    emit(&a.out, &bytes)?;

    let drift = drift_report(&traj, &CONSERVED)?;
    let sidecar = DriftSidecar {
        schema: SCHEMA,
        system: sys,
        init: a.init,
        time: a.time,
        dt: a.dt,
        step: traj.step,
        order: traj.order,
        energy_drift: traj.energy_drift(),
        drift: &drift,
    };
    let mut json = serde_json::to_string_pretty(&sidecar)?;
    json.push('\n');
    let target = a.drift.clone().or_else(|| {
        a.out.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".drift.json");
            PathBuf::from(s)
        })
    });
    match target {
        Some(p) => fs::write(&p, json).map_err(io_err(&p))?,
        None => io::stderr().lock().write_all(json.as_bytes()).map_err(io_err(Path::new("<stderr>")))?,
    }
    Ok(traj.energy_drift() <= a.tolerance)
}

#[derive(Serialize)]
struct ActionsReport {
    schema: &'static str,
    system: SystemKind,
    samples: usize,
    #[serde(flatten)]
    series: superfactor_core::action_angle::OrbitActions,
    checks: Vec<Check>,
    passed: bool,
}

fn read_orbit(path: &Path, sys: SystemKind) -> Result<Trajectory, CliError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let mut samples = Vec::new();
    for row in rd.deserialize::<Row>() {
        let row = row?;
        let point = PhasePoint::new(row.r, row.p_r, row.theta, row.p_theta, row.phi, row.p_phi)?;
        samples.push(Sample { t: row.t, point });
    }
    if samples.len() < 3 {
        return Err(CliError::Usage(format!("{}: need at least 3 samples", path.display())));
    }
    let spacing = samples.windows(2).map(|w| w[1].t - w[0].t).fold(f64::INFINITY, f64::min);
    if !(spacing > 0.0) {
        return Err(CliError::Usage(format!("{}: times must increase", path.display())));
    }
    Ok(Trajectory { system: sys, samples, step: spacing / 4.0, order: 6, tolerance: 0.0 })
}

fn actions(a: &ActionsArgs) -> Outcome {
    let sys = a.system.kind();
    let traj = read_orbit(&a.orbit, sys)?;
    let series = orbit_actions(&traj)?;
    let mut constant = Check::new("actions, xi_phi and xi_theta constant", a.tol_constant);
    constant.record(series.max_constant_deviation());
    let mut slope = Check::new("xi_r slope matches the radial frequency", a.tol_slope);
    slope.record((series.xi_r_fit.slope - series.expected_rate).abs() / series.expected_rate.abs());
    let mut fit = Check::new("xi_r linear fit residual", a.tol_slope);
    fit.record(series.xi_r_fit.max_residual);
    let checks = vec![constant, slope, fit];
    let passed = checks.iter().all(|c| c.passed);
    let report = ActionsReport { schema: SCHEMA, system: sys, samples: traj.samples.len(), series, checks, passed };
    emit_json(&a.out, &report)?;
    Ok(passed)
}

fn run(cli: &Cli) -> Outcome {
    match &cli.cmd {
        Command::Verify(Suite::Quantum(a)) => verify_quantum(a),
        Command::Verify(Suite::Classical(a)) => verify_classical(a),
        Command::Spectrum(s) => spectrum(s),
        Command::Harmonics(a) => harmonics(a),
        Command::Orbit(a) => orbit(a),
        Command::Actions(a) => actions(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("superfactor: {e}");
            ExitCode::from(2)
        }
    }
}
