//! Factorization-method symmetries of the isotropic oscillator and the
//! Kepler-Coulomb problem in three dimensions.
//!
//! The crate has two halves. The quantum half builds separated
//! eigenfunctions `R(r) P(θ) e^{imφ}` in closed quasi-polynomial classes
//! ([`exactfun`]) and applies shift, ladder and symmetry operators to them
//! exactly ([`qm`]). The classical half evaluates the matching phase-space
//! functions ([`classical`]), integrates orbits ([`dynamics`]) and extracts
//! action-angle variables from the symmetry phases ([`action_angle`]).

pub mod action_angle;
pub mod classical;
pub mod dynamics;
pub mod exactfun;
pub mod qm;
pub mod report;
pub mod scalar;
pub mod suites;

pub use exactfun::{AngularFunction, AzimuthalMode, FunctionError, RadialFunction};
pub use report::{Check, VerificationReport};
pub use scalar::{Exact, Real, Sign, C64};
