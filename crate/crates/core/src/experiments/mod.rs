//! Disorder-replica campaigns and the statistical checks run on them.
//!
//! A campaign samples one environment per `(n, stream)` cell, computes the
//! per-environment observables, and folds them into per-`n` estimates. The
//! checks compare those estimates against drift and Monte Carlo envelopes
//! that are set in the configuration.

pub mod checks;
pub mod config;
pub mod replicas;
pub mod report;

pub use checks::{estimate_limits, Limits, LimitRow, StatsSummary, Verdict};
pub use config::{ExperimentConfig, FiberConfig, Mode};
pub use replicas::{run_replicas, ReplicaRow, ReplicaTable};
pub use report::{run_experiment, write_outputs, Outcome, Report, Status, Summary};
