use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{generate, Model, ModelSpec};
use crate::error::{Error, Result};
use crate::selection::{novas_select, SelectorConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub p: usize,
    pub seconds: f64,
    pub fits_evaluated: u64,
    pub threads: usize,
    /// Final subset of the timed run, 1-based.
    pub selected: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub n: usize,
    pub stages: usize,
    pub rows: Vec<BenchmarkRow>,
    /// Least-squares slope of log(seconds) against log(p).
    pub slope: f64,
}

/// Times NOVAS with exactly `stages` stages on model 1 data for every `p` in
/// `p_list`. Each row reports the fastest of `repeats` runs. Runs on the
/// current rayon pool.
pub fn benchmark_scaling(
    p_list: &[usize],
    n: usize,
    stages: usize,
    repeats: usize,
    seed: u64,
) -> Result<BenchmarkReport> {
    if p_list.len() < 2 {
        return Err(Error::InvalidConfig(
            "benchmark needs at least two values of p".into(),
        ));
    }
    if stages == 0 || repeats == 0 {
        return Err(Error::InvalidConfig(
            "stages and repeats must be positive".into(),
        ));
    }
    let config = SelectorConfig {
        forced_stages: Some(stages),
        ..Default::default()
    };
    let mut rows = Vec::with_capacity(p_list.len());
    for &p in p_list {
        let spec = ModelSpec {
            model: Model::M1,
            n,
            p,
            seed,
            ..Default::default()
        };
        let ds = generate(&spec)?.standardize()?;
        let mut best = f64::INFINITY;
        let mut last = None;
        for _ in 0..repeats {
            let start = Instant::now();
            let trace = novas_select(&ds, &config)?;
            best = best.min(start.elapsed().as_secs_f64());
            last = Some(trace);
        }
        let trace = last.expect("repeats > 0");
        rows.push(BenchmarkRow {
            p,
            seconds: best,
            fits_evaluated: trace.fits_evaluated,
            threads: rayon::current_num_threads(),
            selected: trace.final_subset.one_based(),
        });
    }
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.p as f64, r.seconds)).collect();
    let slope = loglog_slope(&points);
    Ok(BenchmarkReport {
        n,
        stages,
        rows,
        slope,
    })
}

/// Ordinary least-squares slope of `ln y` on `ln x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|l| l.0).sum::<f64>() / k;
    let my = logs.iter().map(|l| l.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
