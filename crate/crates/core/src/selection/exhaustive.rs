use itertools::Itertools;
use rayon::prelude::*;

use super::SelectorConfig;
use crate::cv::SubsetCandidate;
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::regression::select_bandwidth_weighted;
use crate::subset::Subset;

/// Largest number of subsets an exhaustive search may score.
pub const EXHAUSTIVE_LIMIT: u128 = 1_000_000;

/// Number of nonempty subsets of `p` covariates with at most `max_size` members.
pub fn subset_count(p: usize, max_size: usize) -> u128 {
    let mut total = 0u128;
    let mut binom = 1u128;
    for k in 1..=max_size.min(p) {
        binom = binom * (p - k + 1) as u128 / k as u128;
        total += binom;
    }
    total
}

/// Scores every subset of size `1..=max_size`, ranked best first.
pub fn exhaustive_scan(
    dataset: &Dataset,
    config: &SelectorConfig,
    max_size: usize,
) -> Result<Vec<SubsetCandidate>> {
    let p = dataset.p();
    config.weight.validate(p)?;
    if max_size == 0 {
        return Err(Error::InvalidConfig("max_size must be positive".into()));
    }
    let count = subset_count(p, max_size);
    if count > EXHAUSTIVE_LIMIT {
        return Err(Error::TooManySubsets {
            count,
            limit: EXHAUSTIVE_LIMIT,
        });
    }
    let subsets: Vec<Subset> = (1..=max_size.min(p))
        .flat_map(|k| (0..p).combinations(k))
        .map(|c| Subset::new(c).expect("combinations are distinct"))
        .collect();
    let mut scored = subsets
        .into_par_iter()
        .map(|subset| {
            let (bandwidth, score) = select_bandwidth_weighted(
                dataset,
                &subset,
                &config.bandwidth_grid,
                &config.weight,
            )?;
            Ok(SubsetCandidate {
                subset,
                score,
                bandwidth,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    scored.sort_by(SubsetCandidate::rank_order);
    Ok(scored)
}

/// Global CV minimizer over all subsets of size at most `max_size`.
pub fn exhaustive_select(
    dataset: &Dataset,
    config: &SelectorConfig,
    max_size: usize,
) -> Result<SubsetCandidate> {
    let mut all = exhaustive_scan(dataset, config, max_size)?;
    Ok(all.swap_remove(0))
}
