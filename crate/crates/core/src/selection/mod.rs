//! Subset search over the cross-validation criterion.
//!
//! [`novas_select`] merges the best subsets of each stage pairwise,
//! [`mpdp_select`] is greedy forward selection, and [`exhaustive_select`]
//! scores every small subset and serves as ground truth in tests.
//!
//! Candidate scoring within a stage runs as a rayon parallel map whose output
//! order is fixed by the input order, so results do not depend on the number
//! of worker threads.

mod exhaustive;
mod mpdp;
mod novas;

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use exhaustive::{exhaustive_scan, exhaustive_select, subset_count, EXHAUSTIVE_LIMIT};
pub use mpdp::mpdp_select;
pub use novas::novas_select;

use crate::cv::{SubsetCandidate, WeightFn};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::kernel::BandwidthGrid;
use crate::regression::select_bandwidth_weighted;
use crate::subset::Subset;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelectorConfig {
    /// Minimum relative gain required to accept the next stage.
    pub threshold: f64,
    /// Computing budget `q`; `None` means `q = p`.
    pub budget_q: Option<usize>,
    pub max_stages: usize,
    pub bandwidth_grid: BandwidthGrid,
    pub weight: WeightFn,
    /// Only used by simulation drivers; selection itself is deterministic.
    pub seed: u64,
    /// Run exactly this many stages, ignoring the gain rule.
    pub forced_stages: Option<usize>,
}

impl Default for SelectorConfig {
    fn default() -> Self {
        Self {
            threshold: 0.05,
            budget_q: None,
            max_stages: 10,
            bandwidth_grid: BandwidthGrid::default(),
            weight: WeightFn::Unit,
            seed: 0,
            forced_stages: None,
        }
    }
}

impl SelectorConfig {
    pub fn validate(&self, p: usize) -> Result<()> {
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "threshold must lie in (0, 1), got {}",
                self.threshold
            )));
        }
        // The implicit q = p may be below 4; the floor of two retained
        // subsets per stage still applies.
        if let Some(q) = self.budget_q.filter(|&q| q < 4) {
            return Err(Error::InvalidConfig(format!(
                "budget q must be at least 4, got {q}"
            )));
        }
        if self.max_stages == 0 {
            return Err(Error::InvalidConfig("max_stages must be positive".into()));
        }
        if self.forced_stages == Some(0) {
            return Err(Error::InvalidConfig(
                "forced_stages must be positive".into(),
            ));
        }
        self.weight.validate(p)
    }

    pub fn budget(&self, p: usize) -> usize {
        self.budget_q.unwrap_or(p)
    }

    /// Subsets retained per stage: `max(2, floor(sqrt(q)))`, capped at `p`.
    pub fn retained_per_stage(&self, p: usize) -> usize {
        let root = (self.budget(p) as f64).sqrt().floor() as usize;
        root.max(2).min(p)
    }

    fn stage_limit(&self) -> usize {
        self.forced_stages.unwrap_or(self.max_stages)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Novas,
    Mpdp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Relative gain of the last stage did not exceed the threshold.
    InsufficientGain,
    /// The accepted stage already has a zero score.
    PerfectFit,
    MaxStages,
    ForcedStages,
    /// No new subsets could be generated.
    Exhausted,
}

/// One stage of a selection run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: usize,
    /// Candidates produced before filtering (pairwise unions for NOVAS).
    pub generated: usize,
    /// Candidates actually scored in this stage.
    pub scored: usize,
    /// Ranked best candidates kept for the next stage.
    pub retained: Vec<SubsetCandidate>,
    /// Relative gain of this stage's best over the previous stage's best.
    pub gain: Option<f64>,
    /// Cumulative counters after this stage.
    pub fits_evaluated: u64,
    pub subset_fits: u64,
}

impl StageRecord {
    pub fn best(&self) -> &SubsetCandidate {
        &self.retained[0]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionTrace {
    pub method: Method,
    pub stages: Vec<StageRecord>,
    pub final_subset: Subset,
    pub final_score: f64,
    pub final_bandwidth: f64,
    /// 1-based stage whose best subset was returned.
    pub accepted_stage: usize,
    pub stop_reason: StopReason,
    /// Distinct (subset, bandwidth) local linear CV evaluations.
    pub fits_evaluated: u64,
    /// Distinct subsets scored.
    pub subset_fits: u64,
    /// Generated candidates that were already scored (or repeated) and skipped.
    pub cache_hits: u64,
}

impl SelectionTrace {
    fn finish(
        method: Method,
        stages: Vec<StageRecord>,
        accepted_stage: usize,
        stop_reason: StopReason,
        scorer: &Scorer<'_>,
    ) -> Self {
        let best = stages[accepted_stage - 1].best().clone();
        Self {
            method,
            stages,
            final_subset: best.subset,
            final_score: best.score,
            final_bandwidth: best.bandwidth,
            accepted_stage,
            stop_reason,
            fits_evaluated: scorer.fits_evaluated,
            subset_fits: scorer.subset_fits,
            cache_hits: scorer.cache_hits,
        }
    }
}

/// Scores subsets once each, caching by canonical subset.
pub(crate) struct Scorer<'a> {
    dataset: &'a Dataset,
    grid: &'a BandwidthGrid,
    weight: &'a WeightFn,
    cache: HashMap<Subset, SubsetCandidate>,
    fits_evaluated: u64,
    subset_fits: u64,
    cache_hits: u64,
}

impl<'a> Scorer<'a> {
    pub(crate) fn new(dataset: &'a Dataset, config: &'a SelectorConfig) -> Self {
        Self {
            dataset,
            grid: &config.bandwidth_grid,
            weight: &config.weight,
            cache: HashMap::new(),
            fits_evaluated: 0,
            subset_fits: 0,
            cache_hits: 0,
        }
    }

    pub(crate) fn is_scored(&self, subset: &Subset) -> bool {
        self.cache.contains_key(subset)
    }

    pub(crate) fn record_hit(&mut self) {
        self.cache_hits += 1;
    }

    /// Scores `subsets` (each new to this scorer) and returns them ranked.
    pub(crate) fn score_ranked(&mut self, subsets: Vec<Subset>) -> Result<Vec<SubsetCandidate>> {
        debug_assert!(subsets.iter().all(|s| !self.is_scored(s)));
        let (dataset, grid, weight) = (self.dataset, self.grid, self.weight);
        let mut scored = subsets
            .into_par_iter()
            .map(|subset| {
                let (bandwidth, score) = select_bandwidth_weighted(dataset, &subset, grid, weight)?;
                Ok(SubsetCandidate {
                    subset,
                    score,
                    bandwidth,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        self.subset_fits += scored.len() as u64;
        self.fits_evaluated += (scored.len() * grid.len()) as u64;
        for c in &scored {
            self.cache.insert(c.subset.clone(), c.clone());
        }
        scored.sort_by(SubsetCandidate::rank_order);
        Ok(scored)
    }
}

pub(crate) fn check_dataset(dataset: &Dataset, config: &SelectorConfig) -> Result<()> {
    if !dataset.is_standardized() {
        return Err(Error::InvalidDataset(
            "selection requires standardized covariates".into(),
        ));
    }
    if dataset.p() < 2 {
        return Err(Error::InvalidDataset(
            "selection requires at least 2 covariates".into(),
        ));
    }
    config.validate(dataset.p())
}
