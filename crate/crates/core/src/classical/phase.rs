use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ClassicalError;

/// Canonical coordinates `(r, p_r, θ, p_θ, φ, p_φ)` in units with `2m = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub r: f64,
    pub p_r: f64,
    pub theta: f64,
    pub p_theta: f64,
    pub phi: f64,
    pub p_phi: f64,
}

/// Slot indices of the configuration coordinates; momenta follow each one.
pub const Q_SLOTS: [usize; 3] = [0, 2, 4];

impl PhasePoint {
    pub fn new(r: f64, p_r: f64, theta: f64, p_theta: f64, phi: f64, p_phi: f64) -> Result<Self, ClassicalError> {
        Self::from_array([r, p_r, theta, p_theta, phi, p_phi])
    }

    pub fn from_array(x: [f64; 6]) -> Result<Self, ClassicalError> {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(ClassicalError::Invalid("non-finite coordinate".into()));
        }
        if x[0] <= 0.0 {
            return Err(ClassicalError::Invalid(format!("r must be positive, got {}", x[0])));
        }
        if x[2] <= 0.0 || x[2] >= std::f64::consts::PI {
            return Err(ClassicalError::Invalid(format!("theta must lie in (0, pi), got {}", x[2])));
        }
        Ok(Self::from_array_unchecked(x))
    }

    pub(crate) fn from_array_unchecked(x: [f64; 6]) -> Self {
        Self { r: x[0], p_r: x[1], theta: x[2], p_theta: x[3], phi: x[4], p_phi: x[5] }
    }

    pub fn to_array(&self) -> [f64; 6] {
        [self.r, self.p_r, self.theta, self.p_theta, self.phi, self.p_phi]
    }

    pub fn lz(&self) -> f64 {
        self.p_phi
    }

    pub fn l2(&self) -> f64 {
        let s = self.theta.sin();
        self.p_theta * self.p_theta + self.p_phi * self.p_phi / (s * s)
    }

    /// Same point with `φ` reduced to `[0, 2π)`.
    pub fn wrapped(&self) -> Self {
        Self { phi: self.phi.rem_euclid(std::f64::consts::TAU), ..*self }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "system", rename_all = "lowercase")]
pub enum SystemKind {
    Ho { omega: f64 },
    Kc { k: f64 },
}

impl SystemKind {
    pub fn ho(omega: f64) -> Result<Self, ClassicalError> {
        if omega.is_finite() && omega > 0.0 {
            Ok(Self::Ho { omega })
        } else {
            Err(ClassicalError::Invalid(format!("omega must be positive, got {omega}")))
        }
    }

    pub fn kc(k: f64) -> Result<Self, ClassicalError> {
        if k.is_finite() && k > 0.0 {
            Ok(Self::Kc { k })
        } else {
            Err(ClassicalError::Invalid(format!("k must be positive, got {k}")))
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Ho { .. } => "ho",
            Self::Kc { .. } => "kc",
        }
    }

    /// The coupling, `ω` or `k`.
    pub fn coupling(&self) -> f64 {
        match *self {
            Self::Ho { omega } => omega,
            Self::Kc { k } => k,
        }
    }

    pub fn potential(&self, r: f64) -> f64 {
        match *self {
            Self::Ho { omega } => 0.25 * omega * omega * r * r,
            Self::Kc { k } => -k / r,
        }
    }

    pub fn hamiltonian(&self, pt: &PhasePoint) -> f64 {
        pt.p_r * pt.p_r + self.potential(pt.r) + pt.l2() / (pt.r * pt.r)
    }

    /// Radial period of bound motion at energy `e`: `π/ω` for HO, `2πk / (4(-E)^{3/2})` for KC.
    pub fn radial_period(&self, e: f64) -> Option<f64> {
        match *self {
            Self::Ho { omega } => Some(std::f64::consts::PI / omega),
            Self::Kc { k } if e < 0.0 => Some(std::f64::consts::TAU * k / (4.0 * (-e).powf(1.5))),
            Self::Kc { .. } => None,
        }
    }

    /// Point on the circular equatorial orbit with `L = L_z = ell > 0`.
    pub fn circular_point(&self, ell: f64) -> PhasePoint {
        let r = match *self {
            Self::Ho { omega } => (2.0 * ell / omega).sqrt(),
            Self::Kc { k } => 2.0 * ell * ell / k,
        };
        PhasePoint::from_array_unchecked([r, 0.0, std::f64::consts::FRAC_PI_2, 0.0, 0.0, ell])
    }
}

/// Random point away from the coordinate singularities: `r ∈ [0.3, 5]`,
/// `θ ∈ [0.2, π-0.2]`, and `H < -0.01` for KC.
pub fn random_point<G: Rng + ?Sized>(sys: &SystemKind, rng: &mut G) -> PhasePoint {
    use std::f64::consts::{PI, TAU};
    loop {
        let r = rng.random_range(0.3..5.0);
        let theta = rng.random_range(0.2..PI - 0.2);
        let phi = rng.random_range(0.0..TAU);
        let scale = match *sys {
            SystemKind::Ho { omega } => 1.5 * omega.max(0.5),
            SystemKind::Kc { k } => (k / r).sqrt(),
        };
        let mut mom = || rng.random_range(-scale..scale);
        let p_r = mom();
        let p_theta = mom() * r;
        let p_phi = mom() * r * theta.sin();
        let pt = PhasePoint::from_array_unchecked([r, p_r, theta, p_theta, phi, p_phi]);
        if let SystemKind::Kc { .. } = sys {
            if sys.hamiltonian(&pt) >= -0.01 {
                continue;
            }
        }
        if pt.l2() < 1e-6 {
            continue;
        }
        return pt;
    }
}

/// Start of a well-conditioned bound orbit: `|p_φ| ≥ 0.1ℓ` keeps `sinθ ≥ 0.1`.
/// KC also needs `H < -0.1` and eccentricity below 0.9; HO needs
/// `ωℓ ≥ 0.2 H`, which bounds the inner turning point away from the origin.
pub fn random_orbit_start<G: Rng + ?Sized>(sys: &SystemKind, rng: &mut G) -> PhasePoint {
    loop {
        let pt = random_point(sys, rng);
        let ell = pt.l2().sqrt();
        if pt.p_phi.abs() < 0.1 * ell {
            continue;
        }
        let h = sys.hamiltonian(&pt);
        let ok = match *sys {
            SystemKind::Kc { k } => h < -0.1 && (1.0 + 4.0 * h * ell * ell / (k * k)).max(0.0).sqrt() < 0.9,
            SystemKind::Ho { omega } => omega * ell >= 0.2 * h,
        };
        if ok {
            return pt;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn involutive_examples() {
        let kc = SystemKind::kc(1.0).unwrap();
        let pt = PhasePoint::new(2.0, 0.0, FRAC_PI_2, 0.0, 0.0, 1.0).unwrap();
        assert!((kc.hamiltonian(&pt) + 0.25).abs() < 1e-15);
        assert!((pt.l2() - 1.0).abs() < 1e-15);
        let ho = SystemKind::ho(1.0).unwrap();
        let pt = PhasePoint::new(2f64.sqrt(), 0.0, FRAC_PI_2, 0.0, 0.0, 1.0).unwrap();
        assert!((ho.hamiltonian(&pt) - 1.0).abs() < 1e-15);
        assert_eq!(ho.circular_point(1.0).r, 2f64.sqrt());
    }

    #[test]
    fn rejects_boundary_points() {
        assert!(PhasePoint::new(0.0, 0.0, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(PhasePoint::new(1.0, 0.0, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(SystemKind::kc(-1.0).is_err());
    }

    #[test]
    fn sampler_respects_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let kc = SystemKind::kc(1.0).unwrap();
        for _ in 0..200 {
            let pt = random_point(&kc, &mut rng);
            assert!(kc.hamiltonian(&pt) < -0.01);
            assert!((0.3..5.0).contains(&pt.r));
            assert!(pt.theta >= 0.2 && pt.theta <= std::f64::consts::PI - 0.2);
        }
    }

    #[test]
    fn system_json_shape() {
        let s = serde_json::to_string(&SystemKind::Kc { k: 2.0 }).unwrap();
        assert_eq!(s, r#"{"system":"kc","k":2.0}"#);
    }
}
