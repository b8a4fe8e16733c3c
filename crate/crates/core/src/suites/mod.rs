//! Verification suites shared by the command line and the acceptance tests.

pub mod classical;
pub mod quantum;
