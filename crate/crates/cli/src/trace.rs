//! JSON-lines selection traces and the stage summary table rendered from
//! them. The summary is produced only from records, so re-reading a trace
//! file reproduces it exactly.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use novas_core::selection::{Method, SelectionTrace, StopReason};
use novas_core::SelectorConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    /// 1-based covariate indices.
    pub subset: Vec<usize>,
    pub score: f64,
    pub bandwidth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case", deny_unknown_fields)]
pub enum TraceRecord {
    Header {
        method: Method,
        n: usize,
        p: usize,
        response: String,
        covariates: Vec<String>,
        threshold: f64,
        budget_q: usize,
        retained_per_stage: usize,
        bandwidth_grid: Vec<f64>,
    },
    Stage {
        stage: usize,
        generated: usize,
        scored: usize,
        gain: Option<f64>,
        best_subset: Vec<usize>,
        best_score: f64,
        best_bandwidth: f64,
        /// Best candidates of the stage in rank order.
        top: Vec<CandidateRecord>,
        /// Cumulative counters after this stage.
        fits_evaluated: u64,
        subset_fits: u64,
    },
    Final {
        subset: Vec<usize>,
        names: Vec<String>,
        score: f64,
        bandwidth: f64,
        accepted_stage: usize,
        stop_reason: StopReason,
        fits_evaluated: u64,
        subset_fits: u64,
        cache_hits: u64,
    },
}

/// Everything about a run that the trace header records besides the search.
pub struct RunInfo<'a> {
    pub n: usize,
    pub response: &'a str,
    pub covariates: &'a [String],
    pub config: &'a SelectorConfig,
}

pub fn build_records(trace: &SelectionTrace, info: &RunInfo<'_>, top_k: usize) -> Vec<TraceRecord> {
    let p = info.covariates.len();
    let mut records = Vec::with_capacity(trace.stages.len() + 2);
    records.push(TraceRecord::Header {
        method: trace.method,
        n: info.n,
        p,
        response: info.response.to_owned(),
        covariates: info.covariates.to_vec(),
        threshold: info.config.threshold,
        budget_q: info.config.budget(p),
        retained_per_stage: info.config.retained_per_stage(p),
        bandwidth_grid: info.config.bandwidth_grid.multipliers().to_vec(),
    });
    for stage in &trace.stages {
        let best = stage.best();
        records.push(TraceRecord::Stage {
            stage: stage.stage,
            generated: stage.generated,
            scored: stage.scored,
            gain: stage.gain,
            best_subset: best.subset.one_based(),
            best_score: best.score,
            best_bandwidth: best.bandwidth,
            top: stage
                .retained
                .iter()
                .take(top_k)
                .map(|c| CandidateRecord {
                    subset: c.subset.one_based(),
                    score: c.score,
                    bandwidth: c.bandwidth,
                })
                .collect(),
            fits_evaluated: stage.fits_evaluated,
            subset_fits: stage.subset_fits,
        });
    }
    records.push(TraceRecord::Final {
        subset: trace.final_subset.one_based(),
        names: trace
            .final_subset
            .indices()
            .iter()
            .map(|&j| info.covariates[j].clone())
            .collect(),
        score: trace.final_score,
        bandwidth: trace.final_bandwidth,
        accepted_stage: trace.accepted_stage,
        stop_reason: trace.stop_reason,
        fits_evaluated: trace.fits_evaluated,
        subset_fits: trace.subset_fits,
        cache_hits: trace.cache_hits,
    });
    records
}

pub fn write_records<W: Write>(records: &[TraceRecord], mut out: W) -> CliResult<()> {
    for record in records {
        serde_json::to_writer(&mut out, record).map_err(|e| CliError::Runtime(e.to_string()))?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_records<R: BufRead>(input: R) -> CliResult<Vec<TraceRecord>> {
    let mut records = Vec::new();
    for (k, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line)
            .map_err(|e| CliError::Input(format!("trace line {}: {e}", k + 1)))?;
        records.push(record);
    }
    Ok(records)
}

fn braces(subset: &[usize]) -> String {
    let inner: Vec<String> = subset.iter().map(usize::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

fn stop_label(reason: StopReason) -> &'static str {
    match reason {
        StopReason::InsufficientGain => "gain at or below threshold",
        StopReason::PerfectFit => "perfect fit",
        StopReason::MaxStages => "stage limit reached",
        StopReason::ForcedStages => "forced stage count reached",
        StopReason::Exhausted => "no new subsets",
    }
}

/// Renders the per-stage table (stage, best subset, CV score) and the final
/// selection. Fails unless the records hold a header, at least one stage and
/// a final record.
pub fn render_summary(records: &[TraceRecord]) -> CliResult<String> {
    let missing = |what: &str| CliError::Input(format!("trace has no {what} record"));
    let header = records
        .iter()
        .find(|r| matches!(r, TraceRecord::Header { .. }))
        .ok_or_else(|| missing("header"))?;
    let fin = records
        .iter()
        .find(|r| matches!(r, TraceRecord::Final { .. }))
        .ok_or_else(|| missing("final"))?;
    let stages: Vec<&TraceRecord> = records
        .iter()
        .filter(|r| matches!(r, TraceRecord::Stage { .. }))
        .collect();
    if stages.is_empty() {
        return Err(missing("stage"));
    }

    let mut s = String::new();
    if let TraceRecord::Header {
        method,
        n,
        p,
        response,
        threshold,
        budget_q,
        retained_per_stage,
        ..
    } = header
    {
        let method = match method {
            Method::Novas => "novas",
            Method::Mpdp => "mpdp",
        };
        writeln!(
            s,
            "{method}: n = {n}, p = {p}, response '{response}', threshold {threshold}, \
             q = {budget_q}, {retained_per_stage} kept per stage"
        )
        .unwrap();
    }

    let subsets: Vec<String> = stages
        .iter()
        .map(|r| match r {
            TraceRecord::Stage { best_subset, .. } => braces(best_subset),
            _ => unreachable!(),
        })
        .collect();
    let width = subsets
        .iter()
        .map(String::len)
        .max()
        .unwrap_or(0)
        .max("best subset".len());
    writeln!(
        s,
        "stage  {:<width$}  {:>14}  {:>9}  {:>8}",
        "best subset", "CV score", "bandwidth", "gain"
    )
    .unwrap();
    for (record, subset) in stages.iter().zip(&subsets) {
        if let TraceRecord::Stage {
            stage,
            gain,
            best_score,
            best_bandwidth,
            ..
        } = record
        {
            let gain = gain.map_or_else(|| "-".to_owned(), |g| format!("{g:.4}"));
            writeln!(
                s,
                "{stage:>5}  {subset:<width$}  {best_score:>14.6}  {best_bandwidth:>9.4}  {gain:>8}"
            )
            .unwrap();
        }
    }

    if let TraceRecord::Final {
        subset,
        names,
        score,
        bandwidth,
        accepted_stage,
        stop_reason,
        fits_evaluated,
        subset_fits,
        cache_hits,
    } = fin
    {
        writeln!(
            s,
            "stopped after stage {} ({}); accepted stage {accepted_stage}",
            stages.len(),
            stop_label(*stop_reason)
        )
        .unwrap();
        writeln!(s, "selected {} ({})", braces(subset), names.join(", ")).unwrap();
        writeln!(
            s,
            "CV score {score:.6}, bandwidth {bandwidth:.4}; {fits_evaluated} fits over \
             {subset_fits} subsets, {cache_hits} cache hits"
        )
        .unwrap();
    }
    Ok(s)
}
