use std::collections::HashSet;

use super::{
    check_dataset, Method, Scorer, SelectionTrace, SelectorConfig, StageRecord, StopReason,
};
use crate::cv::{relative_gain, SubsetCandidate};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::subset::Subset;

/// Sequential subset-merging search.
///
/// Stage 1 scores every singleton and keeps the best `p1` of them. Each later
/// stage scores the distinct pairwise unions of the previous stage's retained
/// subsets, skipping unions equal to a parent or already scored, and keeps
/// the best `min(p1, count)`. The run stops once a stage improves the best
/// score by a relative gain of at most `threshold`, returning the previous
/// stage's best subset.
pub fn novas_select(dataset: &Dataset, config: &SelectorConfig) -> Result<SelectionTrace> {
    check_dataset(dataset, config)?;
    let p = dataset.p();
    let keep = config.retained_per_stage(p);
    let limit = config.stage_limit();
    let mut scorer = Scorer::new(dataset, config);

    let singles: Vec<Subset> = (0..p).map(Subset::singleton).collect();
    let ranked = scorer.score_ranked(singles)?;
    let mut stages = vec![record(1, p, ranked, keep, None, &scorer)];

    loop {
        let prev = stages.last().expect("at least one stage");
        let stage = prev.stage + 1;
        if stage > limit {
            let reason = if config.forced_stages.is_some() {
                StopReason::ForcedStages
            } else {
                StopReason::MaxStages
            };
            let best = best_stage(&stages);
            return Ok(SelectionTrace::finish(
                Method::Novas,
                stages,
                best,
                reason,
                &scorer,
            ));
        }
        let prev_best = prev.best().score;
        if config.forced_stages.is_none() && prev_best == 0.0 {
            let accepted = prev.stage;
            return Ok(SelectionTrace::finish(
                Method::Novas,
                stages,
                accepted,
                StopReason::PerfectFit,
                &scorer,
            ));
        }

        let (generated, fresh) = merge_pairs(&prev.retained, &mut scorer);
        if fresh.is_empty() {
            if stage == 2 {
                return Err(Error::EmptyStage(stage));
            }
            let best = best_stage(&stages);
            return Ok(SelectionTrace::finish(
                Method::Novas,
                stages,
                best,
                StopReason::Exhausted,
                &scorer,
            ));
        }
        let ranked = scorer.score_ranked(fresh)?;
        let gain = relative_gain(prev_best, ranked[0].score).ok();
        stages.push(record(stage, generated, ranked, keep, gain, &scorer));

        if config.forced_stages.is_none() && gain.is_some_and(|g| g <= config.threshold) {
            return Ok(SelectionTrace::finish(
                Method::Novas,
                stages,
                stage - 1,
                StopReason::InsufficientGain,
                &scorer,
            ));
        }
    }
}

/// Pairwise unions of `retained` in rank order, minus parents, repeats and
/// anything scored before. Returns the pre-filter count and the new subsets.
fn merge_pairs(retained: &[SubsetCandidate], scorer: &mut Scorer<'_>) -> (usize, Vec<Subset>) {
    let mut generated = 0;
    let mut seen = HashSet::new();
    let mut fresh = Vec::new();
    for (a, left) in retained.iter().enumerate() {
        for right in &retained[a + 1..] {
            generated += 1;
            let union = left.subset.union(&right.subset);
            if union == left.subset
                || union == right.subset
                || scorer.is_scored(&union)
                || !seen.insert(union.clone())
            {
                scorer.record_hit();
                continue;
            }
            fresh.push(union);
        }
    }
    (generated, fresh)
}

fn record(
    stage: usize,
    generated: usize,
    mut ranked: Vec<SubsetCandidate>,
    keep: usize,
    gain: Option<f64>,
    scorer: &Scorer<'_>,
) -> StageRecord {
    let scored = ranked.len();
    ranked.truncate(keep);
    StageRecord {
        stage,
        generated,
        scored,
        retained: ranked,
        gain,
        fits_evaluated: scorer.fits_evaluated,
        subset_fits: scorer.subset_fits,
    }
}

/// 1-based stage holding the overall best candidate.
pub(super) fn best_stage(stages: &[StageRecord]) -> usize {
    stages
        .iter()
        .min_by(|a, b| a.best().rank_order(b.best()))
        .map(|s| s.stage)
        .expect("at least one stage")
}
