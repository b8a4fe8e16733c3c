//! Orbit integration and the analysis of integrated trajectories.

pub mod analysis;
pub mod flow;
pub mod gauss;

pub use analysis::{classify_orbit, drift_report, radial_period, turning_points, DriftReport, OrbitClass, CONSERVED};
pub use flow::{hamilton_flow, propagate, time_reversed, FlowControls, Sample, Trajectory};
pub use gauss::GaussLegendre;
