//! The quantum verification suite: spectra, degeneracy, operator identities
//! applied to random members of the function classes, and the generated
//! spherical harmonics.
//!
//! The suite is generic over the coefficient field. In `f64` residuals are
//! compared against tolerances; with [`Exact`] every residual must vanish.

use num_complex::Complex;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classical::SystemKind;
use crate::exactfun::{AngularFunction, RadialFunction};
use crate::qm::angular::{self as ang, apply_cl, apply_l2m, ladder_theta, shift_theta, spherical_harmonic};
use crate::qm::ho::{self, HoParams};
use crate::qm::kc::{self, KcParams};
use crate::qm::{QmError, SeparatedState};
use crate::report::{Check, VerificationReport};
use crate::scalar::{Exact, Real, Sign};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuantumTolerances {
    pub spectrum: f64,
    pub identity: f64,
    pub harmonic: f64,
}

impl Default for QuantumTolerances {
    fn default() -> Self {
        Self { spectrum: 1e-12, identity: 1e-10, harmonic: 1e-12 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumSuite {
    pub sys: SystemKind,
    pub nmax: i64,
    pub lmax: i64,
    pub samples: usize,
    pub seed: u64,
    pub exact: bool,
    pub tol: QuantumTolerances,
}

impl QuantumSuite {
    pub fn new(sys: SystemKind, nmax: i64, lmax: i64, samples: usize, seed: u64) -> Self {
        Self { sys, nmax, lmax, samples, seed, exact: false, tol: QuantumTolerances::default() }
    }

    pub fn exact(mut self, on: bool) -> Self {
        self.exact = on;
        self
    }

    pub fn run(&self) -> VerificationReport {
        let key = match self.sys {
            SystemKind::Ho { .. } => "omega",
            SystemKind::Kc { .. } => "k",
        };
        let mut rep = VerificationReport::new("quantum", self.sys.name())
            .param(key, self.sys.coupling())
            .param("nmax", self.nmax as f64)
            .param("lmax", self.lmax as f64)
            .param("samples", self.samples as f64)
            .param("exact", if self.exact { 1.0 } else { 0.0 });
        rep.seed = Some(self.seed);
        let checks = if self.exact {
            match BigRational::from_float(self.sys.coupling()) {
                Some(c) => self.checks::<Exact>(c),
                None => {
                    let mut c = Check::new("parameter", 0.0);
                    c.fail("coupling is not a finite number");
                    vec![c]
                }
            }
        } else {
            self.checks::<f64>(self.sys.coupling())
        };
        rep.extend(checks);
        rep
    }

    fn checks<R: Real>(&self, coupling: R) -> Vec<Check> {
        let tol = if R::EXACT {
            QuantumTolerances { spectrum: 0.0, identity: 0.0, harmonic: 0.0 }
        } else {
            self.tol
        };
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut out = Vec::new();
        match self.sys {
            SystemKind::Ho { .. } => {
                let p = HoParams::new(coupling).expect("validated coupling");
                out.extend(ho_spectrum(&p, self.nmax, tol.spectrum));
                let fs: Vec<_> = (0..self.samples).map(|_| random_ho_radial(&mut rng, &p)).collect();
                out.extend(ho_identities(&p, &fs, &mut rng, tol.identity));
            }
            SystemKind::Kc { .. } => {
                let p = KcParams::new(coupling).expect("validated coupling");
                out.extend(kc_spectrum(&p, self.nmax, tol.spectrum));
                let fs: Vec<_> = (0..self.samples).map(|_| random_kc_radial(&mut rng, &p)).collect();
                out.extend(kc_identities(&p, &fs, &mut rng, self.nmax, tol.identity));
            }
        }
        out.extend(angular_identities::<R, _>(&mut rng, self.samples, tol.identity));
        out.extend(harmonic_checks::<R>(self.lmax, tol.harmonic));
        out
    }
}

fn ratio<R: Real, G: Rng>(rng: &mut G) -> R {
    let num = rng.random_range(-6..=6i64);
    let den = rng.random_range(1..=4i64);
    R::from_ratio(num, den)
}

fn random_coeffs<R: Real, G: Rng>(rng: &mut G, len: usize) -> Vec<Complex<R>> {
    let mut c: Vec<Complex<R>> = (0..len).map(|_| Complex::new(ratio(rng), ratio(rng))).collect();
    if c.iter().all(|z| z.re.is_zero() && z.im.is_zero()) {
        c[0] = Complex::new(R::one(), R::zero());
    }
    c
}

/// `r^s q(r) e^{-βr²}` with a random polynomial and a Gaussian width near `ω/4`.
pub fn random_ho_radial<R: Real, G: Rng>(rng: &mut G, p: &HoParams<R>) -> RadialFunction<R> {
    let s = rng.random_range(0..=3i64);
    let len = rng.random_range(1..=5usize);
    let width = R::from_ratio(rng.random_range(1..=4i64), 8);
    RadialFunction::new(s, random_coeffs(rng, len), R::zero(), -(p.omega.clone() * width))
}

/// `r^s q(r) e^{-αr}` with `α = k/(2j)` for a random level `j`.
pub fn random_kc_radial<R: Real, G: Rng>(rng: &mut G, p: &KcParams<R>) -> RadialFunction<R> {
    let s = rng.random_range(0..=3i64);
    let len = rng.random_range(1..=5usize);
    let j = rng.random_range(1..=4i64);
    RadialFunction::new(s, random_coeffs(rng, len), -(p.k.clone() / R::from_i64(2 * j)), R::zero())
}

/// `sin^a θ · q(cos θ)`, the class on which `L̂²_{±a}` acts without poles.
pub fn random_angular<R: Real, G: Rng>(rng: &mut G, a: u32) -> AngularFunction<R> {
    let len = rng.random_range(1..=5usize);
    AngularFunction::new(0, random_coeffs(rng, len))
        .mul_sin_pow(a as i64)
        .expect("non-negative sine powers stay in the class")
}

fn sub_r<R: Real>(a: &RadialFunction<R>, b: &RadialFunction<R>) -> RadialFunction<R> {
    a.try_sub(b).expect("operands share the exponent factor")
}

fn add_r<R: Real>(a: &RadialFunction<R>, b: &RadialFunction<R>) -> RadialFunction<R> {
    a.try_add(b).expect("operands share the exponent factor")
}

fn cs<R: Real>(x: R) -> Complex<R> {
    Complex::new(x, R::zero())
}

/// Runs `lhs(f)` against `rhs(f)` for every sample.
fn identity<T, F, L, Rh>(name: &str, samples: &[F], tol: f64, lhs: L, rhs: Rh, residual: fn(&T, &T) -> f64) -> Check
where
    L: Fn(&F) -> Result<T, QmError>,
    Rh: Fn(&F) -> Result<T, QmError>,
{
    let mut c = Check::new(name, tol);
    for f in samples {
        match (lhs(f), rhs(f)) {
            (Ok(a), Ok(b)) => c.record(residual(&a, &b)),
            (Err(e), _) | (_, Err(e)) => c.fail(e),
        }
    }
    c
}

fn rres<R: Real>(a: &RadialFunction<R>, b: &RadialFunction<R>) -> f64 {
    a.residual(b)
}

fn ares<R: Real>(a: &AngularFunction<R>, b: &AngularFunction<R>) -> f64 {
    a.residual(b)
}

/// Distance from `a` to the best multiple of `b`; exact fields give 0 or ∞.
pub fn radial_prop_residual<R: Real>(a: &RadialFunction<R>, b: &RadialFunction<R>) -> f64 {
    if R::EXACT {
        return if a.proportional(b, 0.0).is_some() { 0.0 } else { f64::INFINITY };
    }
    match a.proportional(b, f64::INFINITY) {
        Some(c) => a.residual(&b.scale(&c)),
        None => f64::INFINITY,
    }
}

pub fn angular_prop_residual<R: Real>(a: &AngularFunction<R>, b: &AngularFunction<R>) -> f64 {
    if R::EXACT {
        return if a.proportional(b, 0.0).is_some() { 0.0 } else { f64::INFINITY };
    }
    match a.proportional(b, f64::INFINITY) {
        Some(c) => a.residual(&b.scale(&c)),
        None => f64::INFINITY,
    }
}

fn state_prop_residual<R: Real>(a: &SeparatedState<R>, b: &SeparatedState<R>) -> f64 {
    if a.is_zero() || b.is_zero() || a.azimuthal != b.azimuthal {
        return f64::INFINITY;
    }
    radial_prop_residual(&a.radial, &b.radial).max(angular_prop_residual(&a.angular, &b.angular))
}

fn ho_spectrum<R: Real>(p: &HoParams<R>, nmax: i64, tol: f64) -> Vec<Check> {
    let mut levels = Check::new("ho spectrum E_n = (w/2)(2n+3)", tol);
    let mut sym = Check::new("ho S+- preserve E_n", tol);
    let mut ladder = Check::new("ho Lambda+ raises n by 2", tol);
    let mut lattice = Check::new("ho lattice paths commute", tol);
    for n in 0..=nmax {
        for ell in (n % 2..=n).step_by(2) {
            for m in -ell..=ell {
                match ho::build_state(n, ell, m, p) {
                    Ok(st) => levels.record(ho::eigen_residual(&st, p)),
                    Err(e) => levels.fail(e),
                }
            }
            let Ok(st) = ho::build_state(n, ell, 0, p) else { continue };
            for sign in Sign::both() {
                let moved = ho::symmetry_s(&st, p, sign);
                if !moved.is_zero() {
                    sym.record(ho::eigen_residual(&moved, p));
                }
            }
            let up = SeparatedState { radial: ho::ladder_r(&st.radial, ell, p, Sign::Plus), n: n + 2, ..st.clone() };
            ladder.record(ho::eigen_residual(&up, p));
            if ell >= 2 && n >= 2 && ell <= n - 2 {
                let Ok(base) = ho::build_state(n - 2, ell - 2, 0, p) else { continue };
                let a = ho::symmetry_s(
                    &SeparatedState { radial: ho::ladder_r(&base.radial, ell - 2, p, Sign::Plus), n, ..base.clone() },
                    p,
                    Sign::Plus,
                );
                let b = ho::symmetry_s(&base, p, Sign::Plus);
                let b = SeparatedState { radial: ho::ladder_r(&b.radial, ell, p, Sign::Plus), n, ..b };
                lattice.record(state_prop_residual(&a, &b));
            }
        }
    }
    vec![levels, sym, ladder, lattice]
}

fn kc_spectrum<R: Real>(p: &KcParams<R>, nmax: i64, tol: f64) -> Vec<Check> {
    let mut levels = Check::new("kc spectrum E_n = -k^2/(4(n+1)^2)", tol);
    let mut deg = Check::new("kc degeneracy (n+1)^2", 0.0);
    let mut sym = Check::new("kc S+- preserve E_n", tol);
    let mut lattice = Check::new("kc lattice paths commute", tol);
    for n in 0..=nmax {
        for ell in 0..=n {
            for m in -ell..=ell {
                match kc::build_state(n, ell, m, p) {
                    Ok(st) => levels.record(kc::eigen_residual(&st, p)),
                    Err(e) => levels.fail(e),
                }
            }
            let Ok(st) = kc::build_state(n, ell, 0, p) else { continue };
            for sign in Sign::both() {
                match kc::symmetry_s(&st, p, sign) {
                    Ok(moved) if !moved.is_zero() => sym.record(kc::eigen_residual(&moved, p)),
                    Ok(_) => {}
                    Err(e) => sym.fail(e),
                }
            }
            if ell >= 1 && ell < n {
                let res = (|| -> Result<f64, QmError> {
                    let base = kc::build_state(n - 1, ell - 1, 0, p)?;
                    let up = SeparatedState { radial: kc::ladder_r(&base.radial, n, p, Sign::Plus)?, n, ..base.clone() };
                    let a = kc::symmetry_s(&up, p, Sign::Plus)?;
                    let b = kc::symmetry_s(&base, p, Sign::Plus)?;
                    let b = SeparatedState { radial: kc::ladder_r(&b.radial, n, p, Sign::Plus)?, n, ..b };
                    Ok(state_prop_residual(&a, &b))
                })();
                lattice.record_result(res);
            }
        }
        match kc::degeneracy(n, p) {
            Ok(d) => deg.record((d as f64 - ((n + 1) * (n + 1)) as f64).abs()),
            Err(e) => deg.fail(e),
        }
    }
    vec![levels, deg, sym, lattice]
}

fn ho_identities<R: Real, G: Rng>(p: &HoParams<R>, fs: &[RadialFunction<R>], rng: &mut G, tol: f64) -> Vec<Check> {
    use ho::{apply_a, apply_b, apply_hl, ladder_r, shift_r};
    use Sign::{Minus, Plus};
    let samples: Vec<(RadialFunction<R>, i64)> = fs.iter().map(|f| (f.clone(), rng.random_range(2..=5i64))).collect();
    let half = p.omega.clone() / R::from_i64(2);
    let w = p.omega.clone();
    let two_w = w.clone() * R::from_i64(2);
    let mut out = Vec::new();
    out.push(identity(
        "ho H_l = a+_l a-_l - (w/2)(2l-1)",
        &samples,
        tol,
        |(f, l)| Ok(apply_hl(f, *l, p)),
        |(f, l)| {
            let aa = apply_a(&apply_a(f, *l, p, Minus), *l, p, Plus);
            Ok(sub_r(&aa, &f.scale_real(half.clone() * R::from_i64(2 * l - 1))))
        },
        rres,
    ));
    out.push(identity(
        "ho H_l = b-_{l+1} b+_{l+1} + (w/2)(2l+3)",
        &samples,
        tol,
        |(f, l)| Ok(apply_hl(f, *l, p)),
        |(f, l)| {
            let bb = apply_b(&apply_b(f, l + 1, p, Plus), l + 1, p, Minus);
            Ok(add_r(&bb, &f.scale_real(half.clone() * R::from_i64(2 * l + 3))))
        },
        rres,
    ));
    out.push(identity(
        "ho a-_{l+1} a+_{l+1} - a+_l a-_l = 2w",
        &samples,
        tol,
        |(f, l)| {
            let x = apply_a(&apply_a(f, l + 1, p, Plus), l + 1, p, Minus);
            let y = apply_a(&apply_a(f, *l, p, Minus), *l, p, Plus);
            Ok(sub_r(&x, &y))
        },
        |(f, _)| Ok(f.scale_real(two_w.clone())),
        rres,
    ));
    out.push(identity(
        "ho b-_{l+1} b+_{l+1} - b+_l b-_l = -2w",
        &samples,
        tol,
        |(f, l)| {
            let x = apply_b(&apply_b(f, l + 1, p, Plus), l + 1, p, Minus);
            let y = apply_b(&apply_b(f, *l, p, Minus), *l, p, Plus);
            Ok(sub_r(&x, &y))
        },
        |(f, _)| Ok(f.scale_real(-two_w.clone())),
        rres,
    ));
    out.push(identity(
        "ho a-_l H_l = (H_{l-1} + w) a-_l",
        &samples,
        tol,
        |(f, l)| Ok(apply_a(&apply_hl(f, *l, p), *l, p, Minus)),
        |(f, l)| {
            let g = apply_a(f, *l, p, Minus);
            Ok(add_r(&apply_hl(&g, l - 1, p), &g.scale_real(w.clone())))
        },
        rres,
    ));
    out.push(identity(
        "ho a+_l H_{l-1} = (H_l - w) a+_l",
        &samples,
        tol,
        |(f, l)| Ok(apply_a(&apply_hl(f, l - 1, p), *l, p, Plus)),
        |(f, l)| {
            let g = apply_a(f, *l, p, Plus);
            Ok(sub_r(&apply_hl(&g, *l, p), &g.scale_real(w.clone())))
        },
        rres,
    ));
    out.push(identity(
        "ho b+_{l+1} H_l = (H_{l+1} + w) b+_{l+1}",
        &samples,
        tol,
        |(f, l)| Ok(apply_b(&apply_hl(f, *l, p), l + 1, p, Plus)),
        |(f, l)| {
            let g = apply_b(f, l + 1, p, Plus);
            Ok(add_r(&apply_hl(&g, l + 1, p), &g.scale_real(w.clone())))
        },
        rres,
    ));
    for sign in Sign::both() {
        let s = R::from_i64(sign.factor());
        out.push(identity(
            &format!("ho [H_l, Lambda{sign}] = {sign}2w Lambda{sign}"),
            &samples,
            tol,
            |(f, l)| {
                let g = ladder_r(f, *l, p, sign);
                Ok(sub_r(&apply_hl(&g, *l, p), &ladder_r(&apply_hl(f, *l, p), *l, p, sign)))
            },
            |(f, l)| Ok(ladder_r(f, *l, p, sign).scale_real(two_w.clone() * s.clone())),
            rres,
        ));
    }
    out.push(identity(
        "ho Delta-_l H_l = H_{l-2} Delta-_l",
        &samples,
        tol,
        |(f, l)| Ok(shift_r(&apply_hl(f, *l, p), *l, p, Minus)),
        |(f, l)| Ok(apply_hl(&shift_r(f, *l, p, Minus), l - 2, p)),
        rres,
    ));
    out.push(identity(
        "ho Delta+ H_l = H_{l+2} Delta+",
        &samples,
        tol,
        |(f, l)| Ok(shift_r(&apply_hl(f, *l, p), *l, p, Plus)),
        |(f, l)| Ok(apply_hl(&shift_r(f, *l, p, Plus), l + 2, p)),
        rres,
    ));
    out
}

fn kc_identities<R: Real, G: Rng>(
    p: &KcParams<R>,
    fs: &[RadialFunction<R>],
    rng: &mut G,
    nmax: i64,
    tol: f64,
) -> Vec<Check> {
    use kc::{apply_dilation, apply_hhat, apply_hl, energy, ladder_r, shift_r};
    use Sign::{Minus, Plus};
    let samples: Vec<(RadialFunction<R>, i64, i64)> =
        fs.iter().map(|f| (f.clone(), rng.random_range(0..=4i64), rng.random_range(1..=4i64))).collect();
    let shift_const = |l: i64| p.k.clone() * p.k.clone() / R::from_i64(4 * (l + 1) * (l + 1));
    let mut out = Vec::new();
    out.push(identity(
        "kc H_l = d-_{l+1} d+_{l+1} - k^2/(4(l+1)^2)",
        &samples,
        tol,
        |(f, l, _)| Ok(apply_hl(f, *l, p)),
        |(f, l, _)| {
            let dd = shift_r(&shift_r(f, *l, p, Plus)?, l + 1, p, Minus)?;
            Ok(sub_r(&dd, &f.scale_real(shift_const(*l))))
        },
        rres,
    ));
    out.push(identity(
        "kc H_{l+1} = d+_{l+1} d-_{l+1} - k^2/(4(l+1)^2)",
        &samples,
        tol,
        |(f, l, _)| Ok(apply_hl(f, l + 1, p)),
        |(f, l, _)| {
            let dd = shift_r(&shift_r(f, l + 1, p, Minus)?, *l, p, Plus)?;
            Ok(sub_r(&dd, &f.scale_real(shift_const(*l))))
        },
        rres,
    ));
    out.push(identity(
        "kc d+_{l+1} H_l = H_{l+1} d+_{l+1}",
        &samples,
        tol,
        |(f, l, _)| shift_r(&apply_hl(f, *l, p), *l, p, Plus),
        |(f, l, _)| Ok(apply_hl(&shift_r(f, *l, p, Plus)?, l + 1, p)),
        rres,
    ));
    out.push(identity(
        "kc h_n = r^2 (H_l - E_n) - l(l+1)",
        &samples,
        tol,
        |(f, _, n)| Ok(apply_hhat(f, *n, p)),
        |(f, l, n)| {
            let g = sub_r(&apply_hl(f, *l, p), &f.scale_real(energy(*n, p)));
            Ok(sub_r(&g.mul_pow(2), &f.scale_real(R::from_i64(l * (l + 1)))))
        },
        rres,
    ));
    out.push(identity(
        "kc h_n = Lambda+_n Lambda-_n - n(n+1)",
        &samples,
        tol,
        |(f, _, n)| Ok(apply_hhat(f, *n, p)),
        |(f, _, n)| {
            let ll = ladder_r(&ladder_r(f, *n, p, Minus)?, *n, p, Plus)?;
            Ok(sub_r(&ll, &f.scale_real(R::from_i64(n * (n + 1)))))
        },
        rres,
    ));
    out.push(identity(
        "kc h_n = Lambda-_{n+1} Lambda+_{n+1} - (n+1)(n+2)",
        &samples,
        tol,
        |(f, _, n)| Ok(apply_hhat(f, *n, p)),
        |(f, _, n)| {
            let ll = ladder_r(&ladder_r(f, n + 1, p, Plus)?, n + 1, p, Minus)?;
            Ok(sub_r(&ll, &f.scale_real(R::from_i64((n + 1) * (n + 2)))))
        },
        rres,
    ));
    out.push(identity(
        "kc Lambda-_n h_n = h_{n-1} Lambda-_n",
        &samples,
        tol,
        |(f, _, n)| ladder_r(&apply_hhat(f, *n, p), *n, p, Minus),
        |(f, _, n)| Ok(apply_hhat(&ladder_r(f, *n, p, Minus)?, n - 1, p)),
        rres,
    ));
    out.push(identity(
        "kc Lambda+_n h_{n-1} = h_n Lambda+_n",
        &samples,
        tol,
        |(f, _, n)| ladder_r(&apply_hhat(f, n - 1, p), *n, p, Plus),
        |(f, _, n)| Ok(apply_hhat(&ladder_r(f, *n, p, Plus)?, *n, p)),
        rres,
    ));
    out.push(identity(
        "kc Lambda-_{n+1} Lambda+_{n+1} - Lambda+_n Lambda-_n = 2(n+1)",
        &samples,
        tol,
        |(f, _, n)| {
            let x = ladder_r(&ladder_r(f, n + 1, p, Plus)?, n + 1, p, Minus)?;
            let y = ladder_r(&ladder_r(f, *n, p, Minus)?, *n, p, Plus)?;
            Ok(sub_r(&x, &y))
        },
        |(f, _, n)| Ok(f.scale_real(R::from_i64(2 * (n + 1)))),
        rres,
    ));
    out.push(identity(
        "kc D_n D_n^-1 = 1",
        &samples,
        tol,
        |(f, _, n)| apply_dilation(&apply_dilation(f, *n, true)?, *n, false),
        |(f, _, _)| Ok(f.clone()),
        rres,
    ));

    // Relations that hold only on eigenfunctions.
    let mut eig = Vec::new();
    for n in 0..=nmax.min(4) {
        for ell in 0..=n {
            if let Ok(st) = kc::build_state(n, ell, 0, p) {
                eig.push((st.radial, ell, n));
            }
        }
    }
    out.push(identity(
        "kc (Lambda-_{n+1} Lambda+_{n+1} - Lambda+_n Lambda-_n) psi_n = 2(n+1) psi_n",
        &eig,
        tol,
        |(f, _, n)| {
            let x = ladder_r(&ladder_r(f, n + 1, p, Plus)?, n + 1, p, Minus)?;
            let y = if *n == 0 { RadialFunction::zero() } else { ladder_r(&ladder_r(f, *n, p, Minus)?, *n, p, Plus)? };
            Ok(if y.is_zero() { x } else { sub_r(&x, &y) })
        },
        |(f, _, n)| Ok(f.scale_real(R::from_i64(2 * (n + 1)))),
        rres,
    ));
    out.push(identity(
        "kc [H_l, Lambda+_{n+1}] psi_n = (E_{n+1} - E_n) Lambda+_{n+1} psi_n",
        &eig,
        tol,
        |(f, l, n)| {
            let g = ladder_r(f, n + 1, p, Plus)?;
            Ok(sub_r(&apply_hl(&g, *l, p), &ladder_r(&apply_hl(f, *l, p), n + 1, p, Plus)?))
        },
        |(f, _, n)| Ok(ladder_r(f, n + 1, p, Plus)?.scale_real(energy(n + 1, p) - energy(*n, p))),
        rres,
    ));
    out
}

fn angular_identities<R: Real, G: Rng>(rng: &mut G, samples: usize, tol: f64) -> Vec<Check> {
    use Sign::{Minus, Plus};
    // (g in class |m-1|, m) for the d-operators; (g, l) for the lambda ladders.
    let shifted: Vec<(AngularFunction<R>, i64)> = (0..samples)
        .map(|_| {
            let m = rng.random_range(1..=4i64);
            (random_angular(rng, (m - 1) as u32), m)
        })
        .collect();
    let free: Vec<(AngularFunction<R>, i64)> = (0..samples)
        .map(|_| {
            let a = rng.random_range(0..=3u32);
            (random_angular(rng, a), rng.random_range(0..=5i64))
        })
        .collect();
    let mut out = Vec::new();
    out.push(identity(
        "L2_m d+_m = d+_m L2_{m-1}",
        &shifted,
        tol,
        |(g, m)| Ok(apply_l2m(&shift_theta(g, *m, Plus)?, *m)?),
        |(g, m)| Ok(shift_theta(&apply_l2m(g, m - 1)?, *m, Plus)?),
        ares,
    ));
    out.push(identity(
        "d-_m d+_m = L2_{m-1} - m(m-1)",
        &shifted,
        tol,
        |(g, m)| Ok(shift_theta(&shift_theta(g, *m, Plus)?, *m, Minus)?),
        |(g, m)| Ok(apply_l2m(g, m - 1)?.try_sub(&g.scale(&cs(R::from_i64(m * (m - 1)))))?),
        ares,
    ));
    out.push(identity(
        "C_l = lambda+_l lambda-_l - l^2",
        &free,
        tol,
        |(g, l)| Ok(apply_cl(g, *l)),
        |(g, l)| Ok(ladder_theta(&ladder_theta(g, *l, Minus), *l, Plus).try_sub(&g.scale(&cs(R::from_i64(l * l))))?),
        ares,
    ));
    out.push(identity(
        "C_l = lambda-_{l+1} lambda+_{l+1} - (l+1)^2",
        &free,
        tol,
        |(g, l)| Ok(apply_cl(g, *l)),
        |(g, l)| {
            let ll = ladder_theta(&ladder_theta(g, l + 1, Plus), l + 1, Minus);
            Ok(ll.try_sub(&g.scale(&cs(R::from_i64((l + 1) * (l + 1)))))?)
        },
        ares,
    ));
    out
}

fn harmonic_checks<R: Real>(lmax: i64, tol: f64) -> Vec<Check> {
    let mut eig = Check::new("Y_lm eigenvalue l(l+1)", tol);
    let mut cl = Check::new("C_l Y_lm = -m^2 Y_lm", tol);
    let mut kill = Check::new("boundary annihilation at m = l", 0.0);
    for ell in 0..=lmax {
        for m in -ell..=ell {
            match spherical_harmonic::<R>(ell, m, false) {
                Ok(y) => {
                    eig.record_result(ang::eigen_residual(&y));
                    cl.record(ares(&apply_cl(&y.theta, ell), &y.theta.scale(&cs(R::from_i64(-m * m)))));
                    if m == ell {
                        let lowered = ladder_theta(&y.theta, ell, Sign::Minus);
                        kill.record(if lowered.is_zero() { 0.0 } else { 1.0 });
                        match shift_theta(&y.theta, ell + 1, Sign::Plus) {
                            Ok(g) => kill.record(if g.is_zero() { 0.0 } else { 1.0 }),
                            Err(e) => kill.fail(e),
                        }
                    }
                }
                Err(e) => eig.fail(e),
            }
        }
    }
    vec![eig, cl, kill]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_suites_pass() {
        for sys in [SystemKind::ho(1.0).unwrap(), SystemKind::kc(2.0).unwrap()] {
            let rep = QuantumSuite::new(sys, 4, 3, 20, 5).run();
            assert!(rep.passed, "{:#?}", rep.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn exact_suites_vanish() {
        for sys in [SystemKind::ho(0.5).unwrap(), SystemKind::kc(1.0).unwrap()] {
            let rep = QuantumSuite::new(sys, 3, 2, 6, 9).exact(true).run();
            assert!(rep.passed, "{:#?}", rep.failures().collect::<Vec<_>>());
            assert!(rep.checks.iter().all(|c| c.max_residual == 0.0));
        }
    }
}
