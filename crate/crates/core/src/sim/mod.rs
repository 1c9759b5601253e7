//! Seeded Monte Carlo experiments: scenario generators and the coverage and
//! interval-length harness.

mod dist;
mod harness;
mod rng;

pub use dist::{draw_sample, DistributionSpec};
pub use harness::{
    coverage_run, length_run, replicate, CoverageReport, LengthReport, MethodCoverage, MethodLength, RunOptions,
    ScenarioInfo,
};
pub use rng::replication_rng;
