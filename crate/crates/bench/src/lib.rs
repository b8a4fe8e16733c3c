//! Shared fixtures for the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use superfactor_core::classical::{random_orbit_start, random_point, PhasePoint, SystemKind};

pub const SEED: u64 = 2024;

pub fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED)
}

pub fn systems() -> [SystemKind; 2] {
    [SystemKind::Ho { omega: 1.0 }, SystemKind::Kc { k: 1.0 }]
}

pub fn points(sys: &SystemKind, n: usize) -> Vec<PhasePoint> {
    let mut rng = rng();
    (0..n).map(|_| random_point(sys, &mut rng)).collect()
}

pub fn orbit_start(sys: &SystemKind) -> PhasePoint {
    random_orbit_start(sys, &mut rng())
}
