use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::Path;

use novas_core::simulation::{benchmark_scaling, BenchmarkReport};
use novas_core::{
    mpdp_select, novas_select, run_experiment, with_threads, BandwidthGrid, ExperimentReport,
    Model, Selector, SelectorConfig, WeightFn,
};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::ingest::{ingest, parse_delimiter};
use crate::trace::{build_records, read_records, render_summary, write_records, RunInfo};
use crate::{BenchmarkArgs, SearchArgs, SelectArgs, SimulateArgs, SummarizeArgs};

/// Parses `unit` or `box:LO,HI` for `p` covariates.
fn parse_weight(spec: &str, p: usize) -> CliResult<WeightFn> {
    if spec == "unit" {
        return Ok(WeightFn::Unit);
    }
    let bounds = spec
        .strip_prefix("box:")
        .and_then(|b| b.split_once(','))
        .and_then(|(lo, hi)| {
            Some((
                lo.trim().parse::<f64>().ok()?,
                hi.trim().parse::<f64>().ok()?,
            ))
        });
    match bounds {
        Some((lo, hi)) => Ok(WeightFn::uniform_box(p, lo, hi)?),
        None => Err(CliError::Config(format!(
            "weight must be 'unit' or 'box:LO,HI', got '{spec}'"
        ))),
    }
}

/// Applies command-line overrides to the configured search settings.
fn search_config(base: SelectorConfig, args: &SearchArgs, p: usize) -> CliResult<SelectorConfig> {
    let mut config = base;
    if let Some(t) = args.threshold {
        config.threshold = t;
    }
    if let Some(q) = args.budget_q {
        config.budget_q = Some(q);
    }
    if let Some(m) = args.max_stages {
        config.max_stages = m;
    }
    if let Some(s) = args.stages {
        config.forced_stages = Some(s);
    }
    if let Some(grid) = &args.grid {
        config.bandwidth_grid = BandwidthGrid::new(grid.clone())?;
    }
    if let Some(w) = &args.weight {
        config.weight = parse_weight(w, p)?;
    }
    config.validate(p)?;
    Ok(config)
}

fn parse_selectors(spec: &str, allow_both: bool) -> CliResult<Vec<Selector>> {
    if allow_both && spec == "both" {
        return Ok(vec![Selector::Novas, Selector::Mpdp]);
    }
    Ok(vec![spec.parse::<Selector>()?])
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Runtime(format!("cannot create {}: {e}", path.display())))
}

fn threaded<R: Send>(threads: usize, f: impl FnOnce() -> CliResult<R> + Send) -> CliResult<R> {
    with_threads(threads, f)?
}

pub fn select(args: SelectArgs, run: RunConfig, threads: usize) -> CliResult<()> {
    let selector = parse_selectors(&args.selector, false)?[0];
    let delimiter = args.delimiter.as_deref().map(parse_delimiter).transpose()?;
    let data = ingest(&args.data, args.response.as_deref(), delimiter)?;
    let p = data.dataset.p();
    if p < 2 {
        return Err(CliError::Input(
            "selection needs at least two covariates".into(),
        ));
    }
    let config = search_config(run.selector, &args.search, p)?;
    let trace = threaded(threads, || {
        Ok(match selector {
            Selector::Novas => novas_select(&data.dataset, &config)?,
            Selector::Mpdp => mpdp_select(&data.dataset, &config)?,
        })
    })?;
    let info = RunInfo {
        n: data.dataset.n(),
        response: &data.response_name,
        covariates: &data.covariate_names,
        config: &config,
    };
    let records = build_records(&trace, &info, args.top);
    if let Some(path) = &args.out {
        write_records(&records, create(path)?)?;
    }
    print!("{}", render_summary(&records)?);
    Ok(())
}

pub fn summarize(args: SummarizeArgs) -> CliResult<()> {
    let file = File::open(&args.trace)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", args.trace.display())))?;
    let records = read_records(BufReader::new(file))?;
    print!("{}", render_summary(&records)?);
    Ok(())
}

pub fn simulate(args: SimulateArgs, run: RunConfig, threads: usize) -> CliResult<()> {
    let mut spec = run.model;
    if let Some(m) = &args.model {
        spec.model = m.parse::<Model>()?;
    }
    if let Some(n) = args.n {
        spec.n = n;
    }
    if let Some(p) = args.p {
        spec.p = p;
    }
    if let Some(nsr) = args.nsr {
        spec.nsr = nsr;
    }
    if let Some(alpha) = args.alpha {
        spec.alpha = alpha;
    }
    if args.trap {
        spec.trap = true;
    }
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    spec.validate()?;
    let reps = args.reps.unwrap_or(run.experiment.replications);
    if reps == 0 {
        return Err(CliError::Config("--reps must be at least 1".into()));
    }
    let selectors = parse_selectors(&args.selector, true)?;
    let config = search_config(run.selector, &args.search, spec.p)?;
    let reports = threaded(threads, || {
        selectors
            .iter()
            .map(|&s| run_experiment(&spec, reps, s, &config).map_err(CliError::from))
            .collect::<CliResult<Vec<_>>>()
    })?;

    print!("{}", experiment_table(&reports));
    let mut sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    for report in &reports {
        serde_json::to_writer(&mut sink, report).map_err(|e| CliError::Runtime(e.to_string()))?;
        sink.write_all(b"\n")?;
    }
    sink.flush()?;
    Ok(())
}

fn aligned(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(String::len)
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, &w)| format!("{cell:>w$}"))
            .collect();
        out.push_str(&cells.join("  "));
        out.push('\n');
    }
    out
}

fn experiment_table(reports: &[ExperimentReport]) -> String {
    let mut rows = vec![[
        "selector",
        "model",
        "n",
        "p",
        "trap",
        "reps",
        "correct",
        "x1",
        "x2",
        "x3",
        "last",
        "exact+last",
        "no intruder",
        "intruder",
        "mean size",
        "mean score",
    ]
    .map(String::from)
    .to_vec()];
    for r in reports {
        rows.push(vec![
            r.selector.to_string(),
            r.spec.model.to_string(),
            r.spec.n.to_string(),
            r.spec.p.to_string(),
            if r.spec.trap { "yes" } else { "no" }.to_string(),
            r.replications.to_string(),
            r.correct_count.to_string(),
            r.variable_counts[0].to_string(),
            r.variable_counts[1].to_string(),
            r.variable_counts[2].to_string(),
            r.last_count.to_string(),
            r.trap.exact_with_last.to_string(),
            r.trap.no_intruder.to_string(),
            r.trap.intruder.to_string(),
            format!("{:.2}", r.mean_size),
            format!("{:.4}", r.score_mean),
        ]);
    }
    aligned(&rows)
}

pub fn benchmark(args: BenchmarkArgs, run: RunConfig, threads: usize) -> CliResult<()> {
    let mut cfg = run.benchmark;
    if let Some(p_list) = args.p_list {
        cfg.p_list = p_list;
    }
    if let Some(n) = args.n {
        cfg.n = n;
    }
    if let Some(stages) = args.stages {
        cfg.stages = stages;
    }
    if let Some(repeats) = args.repeats {
        cfg.repeats = repeats;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if cfg.p_list.len() < 2 {
        return Err(CliError::Config(
            "--p-list needs at least two dimensions".into(),
        ));
    }
    let report = threaded(threads, || {
        benchmark_scaling(&cfg.p_list, cfg.n, cfg.stages, cfg.repeats, cfg.seed)
            .map_err(CliError::from)
    })?;

    print!("{}", benchmark_table(&report));
    let mut sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    serde_json::to_writer(&mut sink, &report).map_err(|e| CliError::Runtime(e.to_string()))?;
    sink.write_all(b"\n")?;
    sink.flush()?;
    Ok(())
}

fn benchmark_table(report: &BenchmarkReport) -> String {
    let mut rows = vec![["p", "seconds", "fits", "threads", "selected"]
        .map(String::from)
        .to_vec()];
    for r in &report.rows {
        let selected: Vec<String> = r.selected.iter().map(usize::to_string).collect();
        rows.push(vec![
            r.p.to_string(),
            format!("{:.4}", r.seconds),
            r.fits_evaluated.to_string(),
            r.threads.to_string(),
            format!("{{{}}}", selected.join(",")),
        ]);
    }
    let mut out = format!("n = {}, {} stages\n", report.n, report.stages);
    out.push_str(&aligned(&rows));
    out.push_str(&format!(
        "log-log slope of time against p: {:.3}\n",
        report.slope
    ));
    out
}
