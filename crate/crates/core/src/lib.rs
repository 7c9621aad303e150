//! Regression-adjustment (CUPED) estimators for randomized experiments, and
//! tooling to measure how much variance reduction an engineered covariate can
//! add on top of adjusting for the pre-period metric alone.
//!
//! - [`correlation`]: closed-form results over the `(σ, τ, ρ)` correlation
//!   structure of `(X, Y_pre, Y_post)`.
//! - [`estimators`]: difference in means, basic/multi-covariate/cross-fitted
//!   regression adjustment.
//! - [`simulation`]: seeded synthetic experiments, replication summaries and
//!   `(ρ, σ)` sweeps.
//! - [`cli`]: the `cuped` command-line front end.

pub mod cli;
pub mod correlation;
pub mod estimators;
pub mod frame;
pub mod simulation;
pub mod stats;

pub use correlation::{CorrelationStructure, ValidationReport};
pub use estimators::{AdjustedEstimate, Method};
pub use frame::{Arm, ExperimentFrame, FrameBuilder};
pub use simulation::{ReplicationSummary, SimulationConfig, SweepResult};

/// SplitMix64 finalizer; used for seed derivation and fold hashing.
pub(crate) fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
