//! Seeded random function families and the property suites run by
//! `bicalc verify`.

pub mod families;
mod suites;

pub use families::Sample;
pub use suites::{smooth_sample, subdivision_checks, verify, CheckResult, Suite, VerifySummary};
