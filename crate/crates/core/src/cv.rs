//! Leave-one-out cross-validation criterion and the relative-gain statistic
//! used by the stopping rule.

use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::kernel::Kernel;
use crate::regression::{check_bandwidth, SubsetDesign};
use crate::subset::Subset;

/// A scored subset: its indices, CV score and the bandwidth that achieved it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetCandidate {
    pub subset: Subset,
    pub score: f64,
    pub bandwidth: f64,
}

impl SubsetCandidate {
    /// Ascending score, then smaller cardinality, then lexicographic indices.
    pub fn rank_order(&self, other: &Self) -> std::cmp::Ordering {
        self.score
            .total_cmp(&other.score)
            .then_with(|| self.subset.tie_order(&other.subset))
    }
}

/// Nonnegative weight applied to each squared leave-one-out residual.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WeightFn {
    #[default]
    Unit,
    /// Indicator of a box in standardized covariate space; `lower[j]` and
    /// `upper[j]` bound covariate `j`. Only the coordinates in the scored
    /// subset are tested.
    Box { lower: Vec<f64>, upper: Vec<f64> },
}

impl WeightFn {
    /// The same interval `[lo, hi]` on each of `p` covariates.
    pub fn uniform_box(p: usize, lo: f64, hi: f64) -> Result<Self> {
        let w = WeightFn::Box {
            lower: vec![lo; p],
            upper: vec![hi; p],
        };
        w.validate(p)?;
        Ok(w)
    }

    pub fn validate(&self, p: usize) -> Result<()> {
        match self {
            WeightFn::Unit => Ok(()),
            WeightFn::Box { lower, upper } => {
                if lower.len() != p || upper.len() != p {
                    return Err(Error::InvalidWeight(format!(
                        "box bounds must have {p} entries, got {} and {}",
                        lower.len(),
                        upper.len()
                    )));
                }
                if lower.iter().chain(upper).any(|v| v.is_nan()) {
                    return Err(Error::InvalidWeight("NaN bound".into()));
                }
                Ok(())
            }
        }
    }

    pub fn evaluate(&self, subset: &Subset, point: &[f64]) -> f64 {
        match self {
            WeightFn::Unit => 1.0,
            WeightFn::Box { lower, upper } => {
                let inside = subset
                    .indices()
                    .iter()
                    .zip(point)
                    .all(|(&j, &v)| lower[j] <= v && v <= upper[j]);
                if inside {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Weight of every row's subset coordinates.
    pub fn evaluate_rows(&self, dataset: &Dataset, subset: &Subset) -> Result<Vec<f64>> {
        subset.check_range(dataset.p())?;
        self.validate(dataset.p())?;
        let x = dataset.x();
        let mut point = vec![0.0; subset.len()];
        Ok((0..dataset.n())
            .map(|i| {
                for (v, &j) in point.iter_mut().zip(subset.indices()) {
                    *v = x[(i, j)];
                }
                self.evaluate(subset, &point)
            })
            .collect())
    }
}

/// Weighted sum of squared leave-one-out residuals over all rows.
pub fn cv_score(
    dataset: &Dataset,
    subset: &Subset,
    bandwidth: f64,
    weight: &WeightFn,
) -> Result<f64> {
    check_bandwidth(bandwidth)?;
    let design = SubsetDesign::new(dataset, subset)?;
    let weights = weight.evaluate_rows(dataset, subset)?;
    let fit = design.loo_fit(bandwidth, Kernel::Epanechnikov);
    Ok(cv_score_from_predictions(
        dataset.y(),
        &fit.predictions,
        &weights,
    ))
}

pub(crate) fn cv_score_from_predictions(y: &[f64], predictions: &[f64], weights: &[f64]) -> f64 {
    y.iter()
        .zip(predictions)
        .zip(weights)
        .filter(|(_, &w)| w != 0.0)
        .map(|((y, p), w)| (y - p) * (y - p) * w)
        .sum()
}

/// `(prev_best - next_best) / prev_best`; negative when the next stage is worse.
pub fn relative_gain(prev_best: f64, next_best: f64) -> Result<f64> {
    if prev_best == 0.0 {
        return Err(Error::ZeroPreviousScore);
    }
    Ok((prev_best - next_best) / prev_best)
}
