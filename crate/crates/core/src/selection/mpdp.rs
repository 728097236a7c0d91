use super::novas::best_stage;
use super::{
    check_dataset, Method, Scorer, SelectionTrace, SelectorConfig, StageRecord, StopReason,
};
use crate::cv::relative_gain;
use crate::data::Dataset;
use crate::error::Result;
use crate::subset::Subset;

/// Greedy forward selection: each step adds the single covariate whose
/// inclusion minimizes the CV score, and stops by the same relative-gain rule
/// as [`super::novas_select`]. After `k` steps `k p - k (k - 1) / 2` subsets
/// have been scored.
pub fn mpdp_select(dataset: &Dataset, config: &SelectorConfig) -> Result<SelectionTrace> {
    check_dataset(dataset, config)?;
    let p = dataset.p();
    let keep = config.retained_per_stage(p);
    let limit = config.stage_limit();
    let mut scorer = Scorer::new(dataset, config);
    let mut stages: Vec<StageRecord> = Vec::new();
    let mut current: Option<Subset> = None;

    loop {
        let step = stages.len() + 1;
        let remaining: Vec<usize> = (0..p)
            .filter(|&j| current.as_ref().is_none_or(|c| !c.contains(j)))
            .collect();
        let stop = if step > limit {
            Some(if config.forced_stages.is_some() {
                StopReason::ForcedStages
            } else {
                StopReason::MaxStages
            })
        } else if remaining.is_empty() {
            Some(StopReason::Exhausted)
        } else if config.forced_stages.is_none()
            && stages.last().is_some_and(|s| s.best().score == 0.0)
        {
            Some(StopReason::PerfectFit)
        } else {
            None
        };
        if let Some(reason) = stop {
            let accepted = match reason {
                StopReason::PerfectFit => stages.len(),
                _ => best_stage(&stages),
            };
            return Ok(SelectionTrace::finish(
                Method::Mpdp,
                stages,
                accepted,
                reason,
                &scorer,
            ));
        }

        let candidates: Vec<Subset> = remaining
            .iter()
            .map(|&j| match &current {
                Some(c) => c.with(j),
                None => Subset::singleton(j),
            })
            .collect();
        let generated = candidates.len();
        let mut ranked = scorer.score_ranked(candidates)?;
        let gain = stages
            .last()
            .and_then(|s| relative_gain(s.best().score, ranked[0].score).ok());
        current = Some(ranked[0].subset.clone());
        ranked.truncate(keep);
        stages.push(StageRecord {
            stage: step,
            generated,
            scored: generated,
            retained: ranked,
            gain,
            fits_evaluated: scorer.fits_evaluated,
            subset_fits: scorer.subset_fits,
        });

        if config.forced_stages.is_none() && gain.is_some_and(|g| g <= config.threshold) {
            return Ok(SelectionTrace::finish(
                Method::Mpdp,
                stages,
                step - 1,
                StopReason::InsufficientGain,
                &scorer,
            ));
        }
    }
}
