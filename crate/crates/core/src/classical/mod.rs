//! Classical phase-space functions, Poisson brackets and the sampler used
//! by the bracket checks.

pub mod catalog;
pub mod jet;
pub mod phase;
pub mod poisson;

use thiserror::Error;

pub use catalog::{catalog, eval, evaluate, gradient, Frozen, ObservableId};
pub use jet::{Cplx, Jet, Scalar};
pub use phase::{random_orbit_start, random_point, PhasePoint, SystemKind};
pub use poisson::{bracket_fd, bracket_ids, bracket_ids_fd, fd_gradient, Semantics, DEFAULT_STEP};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassicalError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singularity: {0}")]
    Singular(String),
    #[error("{observable} is not defined for system {system}")]
    NotDefined { observable: String, system: &'static str },
    #[error("degenerate orbit: {0}")]
    Degenerate(String),
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
}
