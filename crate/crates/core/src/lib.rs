//! Nonparametric variable selection.
//!
//! Subsets of covariates are scored by the leave-one-out cross-validation
//! error of a multivariate local linear regression, and searched either by
//! sequential pairwise merging of the best subsets ([`novas_select`]), by
//! greedy forward selection ([`mpdp_select`]) or exhaustively
//! ([`exhaustive_select`]). The [`simulation`] module generates the
//! synthetic benchmark models and drives replicated experiments.

extern crate self as novas_core;

pub mod cv;
pub mod data;
pub mod error;
pub mod kernel;
pub mod parallel;
pub mod regression;
pub mod selection;
pub mod simulation;
pub mod subset;

#[cfg(test)]
mod testutil;

pub use cv::{cv_score, relative_gain, SubsetCandidate, WeightFn};
pub use data::Dataset;
pub use error::{Error, Result};
pub use kernel::{BandwidthGrid, Kernel};
pub use parallel::with_threads;
pub use regression::{loo_fit, loo_predict, select_bandwidth, select_bandwidth_weighted, LooFit};
pub use selection::{
    exhaustive_scan, exhaustive_select, mpdp_select, novas_select, Method, SelectionTrace,
    SelectorConfig, StageRecord, StopReason,
};
pub use simulation::{generate, run_experiment, ExperimentReport, Model, ModelSpec, Selector};
pub use subset::Subset;
