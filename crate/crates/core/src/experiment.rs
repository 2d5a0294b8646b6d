//! Monte Carlo harness: per-trial evaluation with replayable seeds, cell
//! aggregation, JSONL/CSV persistence and exact small-n expectations.

mod exhaustive;
mod property;
mod stats;
mod sweep;
mod trial;
pub mod validation;

pub use exhaustive::{exhaustive_small_n_expectation, EXHAUSTIVE_MAX_N};
pub use property::{Limits, Outcome, PropertyKind};
pub use stats::{mean_and_variance, wilson_interval, CellSummary};
pub use sweep::{
    analytic_reference, run_cell, run_cell_summary, run_sweep, Densities, SweepConfig, SweepSummary,
};
pub use trial::{run_trial, strip_elapsed, TrialRecord};
