use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{generate, ModelSpec};
use crate::error::{Error, Result};
use crate::selection::{mpdp_select, novas_select, SelectorConfig};
use crate::subset::Subset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Selector {
    Novas,
    Mpdp,
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Selector::Novas => "novas",
            Selector::Mpdp => "mpdp",
        })
    }
}

impl FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "novas" => Ok(Selector::Novas),
            "mpdp" => Ok(Selector::Mpdp),
            other => Err(Error::InvalidConfig(format!("unknown selector '{other}'"))),
        }
    }
}

/// Where a selected set falls relative to the active covariates `{1,2,3}`
/// and the last (possibly trap) covariate `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrapOutcome {
    /// Exactly `{1,2,3}`.
    Exact,
    /// Exactly `{1,2,3,p}`.
    ExactWithLast,
    /// Any other subset of `{1,2,3,p}`, such as `{1,3,p}` or `{3,p}`.
    NoIntruder,
    /// Contains a covariate outside `{1,2,3,p}`.
    Intruder,
}

pub fn classify_trap(selected: &Subset, p: usize) -> TrapOutcome {
    let last = p - 1;
    let idx = selected.indices();
    if idx == [0, 1, 2] {
        TrapOutcome::Exact
    } else if idx == [0, 1, 2, last] {
        TrapOutcome::ExactWithLast
    } else if idx.iter().all(|&j| j <= 2 || j == last) {
        TrapOutcome::NoIntruder
    } else {
        TrapOutcome::Intruder
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrapCounts {
    pub exact: u32,
    pub exact_with_last: u32,
    pub no_intruder: u32,
    pub intruder: u32,
}

impl TrapCounts {
    pub fn add(&mut self, outcome: TrapOutcome) {
        match outcome {
            TrapOutcome::Exact => self.exact += 1,
            TrapOutcome::ExactWithLast => self.exact_with_last += 1,
            TrapOutcome::NoIntruder => self.no_intruder += 1,
            TrapOutcome::Intruder => self.intruder += 1,
        }
    }

    pub fn total(&self) -> u32 {
        self.exact + self.exact_with_last + self.no_intruder + self.intruder
    }
}

/// Running count, mean and sum of squared deviations (Welford), mergeable
/// in any order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, value: f64) {
        self.count += 1;
        let delta = value - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (value - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let total = self.count + other.count;
        let delta = other.mean - self.mean;
        self.mean += delta * other.count as f64 / total as f64;
        self.m2 +=
            other.m2 + delta * delta * (self.count as f64 * other.count as f64) / total as f64;
        self.count = total;
    }

    /// Unbiased sample variance; zero with fewer than two values.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub spec: ModelSpec,
    pub selector: Selector,
    pub threshold: f64,
    pub replications: u32,
    /// Replications selecting exactly `{1,2,3}`.
    pub correct_count: u32,
    /// How often covariates 1, 2 and 3 appear in the selection.
    pub variable_counts: [u32; 3],
    /// How often the last covariate `p` appears in the selection.
    pub last_count: u32,
    pub trap: TrapCounts,
    pub score_mean: f64,
    pub score_variance: f64,
    pub mean_size: f64,
    /// Selected subsets per replication, 1-based.
    pub selections: Vec<Vec<usize>>,
}

struct Replicate {
    subset: Subset,
    score: f64,
}

/// Runs `selector` on `replications` datasets drawn with seeds
/// `spec.seed, spec.seed + 1, ...` and tallies the outcomes.
pub fn run_experiment(
    spec: &ModelSpec,
    replications: u32,
    selector: Selector,
    config: &SelectorConfig,
) -> Result<ExperimentReport> {
    if replications == 0 {
        return Err(Error::InvalidConfig(
            "replications must be at least 1".into(),
        ));
    }
    spec.validate()?;
    config.validate(spec.p)?;
    let outcomes = (0..replications)
        .into_par_iter()
        .map(|r| {
            let ds = generate(&spec.with_seed(spec.seed.wrapping_add(r as u64)))?.standardize()?;
            let trace = match selector {
                Selector::Novas => novas_select(&ds, config)?,
                Selector::Mpdp => mpdp_select(&ds, config)?,
            };
            Ok(Replicate {
                subset: trace.final_subset,
                score: trace.final_score,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut report = ExperimentReport {
        spec: spec.clone(),
        selector,
        threshold: config.threshold,
        replications,
        correct_count: 0,
        variable_counts: [0; 3],
        last_count: 0,
        trap: TrapCounts::default(),
        score_mean: 0.0,
        score_variance: 0.0,
        mean_size: 0.0,
        selections: Vec::with_capacity(outcomes.len()),
    };
    let mut scores = Moments::default();
    let mut size_total = 0usize;
    for rep in &outcomes {
        let outcome = classify_trap(&rep.subset, spec.p);
        if outcome == TrapOutcome::Exact {
            report.correct_count += 1;
        }
        report.trap.add(outcome);
        for (j, count) in report.variable_counts.iter_mut().enumerate() {
            *count += u32::from(rep.subset.contains(j));
        }
        report.last_count += u32::from(rep.subset.contains(spec.p - 1));
        scores.push(rep.score);
        size_total += rep.subset.len();
        report.selections.push(rep.subset.one_based());
    }
    report.score_mean = scores.mean;
    report.score_variance = scores.variance();
    report.mean_size = size_total as f64 / replications as f64;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulation::Model;
    use proptest::prelude::*;

    fn s(v: &[usize]) -> Subset {
        Subset::from_one_based(v).unwrap()
    }

    #[test]
    fn trap_classification() {
        let p = 50;
        assert_eq!(classify_trap(&s(&[1, 2, 3]), p), TrapOutcome::Exact);
        assert_eq!(
            classify_trap(&s(&[1, 2, 3, 50]), p),
            TrapOutcome::ExactWithLast
        );
        assert_eq!(classify_trap(&s(&[1, 3, 50]), p), TrapOutcome::NoIntruder);
        assert_eq!(classify_trap(&s(&[2, 3, 50]), p), TrapOutcome::NoIntruder);
        assert_eq!(classify_trap(&s(&[3, 50]), p), TrapOutcome::NoIntruder);
        assert_eq!(classify_trap(&s(&[1, 2, 3, 7]), p), TrapOutcome::Intruder);
        assert_eq!(classify_trap(&s(&[7, 50]), p), TrapOutcome::Intruder);
    }

    #[test]
    fn zero_replications_rejected() {
        let spec = ModelSpec {
            n: 20,
            p: 5,
            ..Default::default()
        };
        assert!(run_experiment(&spec, 0, Selector::Novas, &SelectorConfig::default()).is_err());
    }

    #[test]
    fn single_replication_tallies() {
        let spec = ModelSpec {
            model: Model::M1,
            n: 60,
            p: 8,
            seed: 4,
            ..Default::default()
        };
        let r = run_experiment(&spec, 1, Selector::Novas, &SelectorConfig::default()).unwrap();
        assert!(r.correct_count <= 1);
        assert_eq!(r.trap.total(), 1);
        assert_eq!(r.selections.len(), 1);
        assert_eq!(r.score_variance, 0.0);
    }

    #[test]
    fn report_counts_are_consistent() {
        let spec = ModelSpec {
            model: Model::M1,
            n: 80,
            p: 10,
            seed: 11,
            ..Default::default()
        };
        let r = run_experiment(&spec, 4, Selector::Mpdp, &SelectorConfig::default()).unwrap();
        assert_eq!(r.trap.total(), 4);
        assert!(r.correct_count <= 4);
        assert_eq!(r.correct_count, r.trap.exact);
        let expect: u32 = r.selections.iter().filter(|v| v.contains(&1)).count() as u32;
        assert_eq!(r.variable_counts[0], expect);
    }

    #[test]
    fn moments_match_two_pass() {
        let xs = [1.0, 4.0, -2.0, 8.5, 3.25];
        let mut m = Moments::default();
        xs.iter().for_each(|&x| m.push(x));
        let mean = xs.iter().sum::<f64>() / 5.0;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 4.0;
        assert!((m.mean - mean).abs() < 1e-12);
        assert!((m.variance() - var).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn moment_merge_is_order_independent(
            xs in proptest::collection::vec(-100.0f64..100.0, 1..40),
            split in 0usize..40,
        ) {
            let split = split.min(xs.len());
            let mut whole = Moments::default();
            xs.iter().for_each(|&x| whole.push(x));
            let (mut a, mut b) = (Moments::default(), Moments::default());
            xs[..split].iter().for_each(|&x| a.push(x));
            xs[split..].iter().for_each(|&x| b.push(x));
            let mut ab = a;
            ab.merge(&b);
            let mut ba = b;
            ba.merge(&a);
            for m in [ab, ba] {
                prop_assert_eq!(m.count, whole.count);
                prop_assert!((m.mean - whole.mean).abs() <= 1e-12 * whole.mean.abs().max(1.0));
                prop_assert!((m.variance() - whole.variance()).abs() <= 1e-9 * whole.variance().max(1.0));
            }
        }
    }
}
