//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line.
//!
//! Run with `cargo test -p novas-core --test acceptance -- --nocapture`.

mod common;

use common::uniform_dataset;
use nalgebra::DMatrix;
use novas_core::selection::subset_count;
use novas_core::simulation::{benchmark_scaling, signal_variance};
use novas_core::{
    exhaustive_select, generate, loo_predict, mpdp_select, novas_select, run_experiment,
    with_threads, BandwidthGrid, Dataset, Model, ModelSpec, Selector, SelectorConfig, Subset,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

const BASE_SEED: u64 = 20_240_601;

fn verdict(id: &str, pass: bool, detail: String) {
    println!("{id}: {} {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{id} failed: {detail}");
}

fn m1(n: usize, p: usize) -> ModelSpec {
    ModelSpec {
        model: Model::M1,
        n,
        p,
        nsr: 0.05,
        seed: BASE_SEED,
        ..Default::default()
    }
}

#[test]
fn ac01_model1_n100_p100() {
    let report = run_experiment(
        &m1(100, 100),
        20,
        Selector::Novas,
        &SelectorConfig::default(),
    )
    .unwrap();
    verdict(
        "AC-1",
        report.correct_count >= 17,
        format!(
            "model 1, n=100, p=100: correct {}/20 (need >= 17)",
            report.correct_count
        ),
    );
}

#[test]
fn ac02_model5_hard_regime() {
    let spec = ModelSpec {
        model: Model::M5,
        n: 50,
        p: 100,
        seed: BASE_SEED,
        ..Default::default()
    };
    let report = run_experiment(&spec, 20, Selector::Novas, &SelectorConfig::default()).unwrap();
    verdict(
        "AC-2",
        report.correct_count <= 4,
        format!(
            "model 5, n=50, p=100: correct {}/20 (need <= 4)",
            report.correct_count
        ),
    );
}

#[test]
fn ac03_threshold_stability() {
    let spec = m1(100, 100);
    let count = |t: f64| {
        let config = SelectorConfig {
            threshold: t,
            ..Default::default()
        };
        run_experiment(&spec, 20, Selector::Novas, &config)
            .unwrap()
            .correct_count
    };
    let (c05, c20, c50) = (count(0.05), count(0.2), count(0.5));
    verdict(
        "AC-3",
        c05 >= 15 && c20 >= 15 && c50 + 5 <= c05,
        format!("correct at t=0.05/0.2/0.5: {c05}/{c20}/{c50} (need >=15, >=15, <= {c05}-5)"),
    );
}

#[test]
fn ac04_trap_column() {
    let spec = ModelSpec {
        model: Model::M4,
        n: 200,
        p: 50,
        trap: true,
        seed: BASE_SEED,
        ..Default::default()
    };
    let config = SelectorConfig::default();
    let novas = run_experiment(&spec, 10, Selector::Novas, &config).unwrap();
    let mpdp = run_experiment(&spec, 10, Selector::Mpdp, &config).unwrap();
    verdict(
        "AC-4",
        novas.trap.exact > mpdp.trap.exact && mpdp.last_count >= 3,
        format!(
            "exact {{1,2,3}}: novas {} vs mpdp {}; mpdp picked column 50 {} times (need >= 3); \
             novas cells {:?}, mpdp cells {:?}",
            novas.trap.exact, mpdp.trap.exact, mpdp.last_count, novas.trap, mpdp.trap
        ),
    );
}

#[test]
fn ac05_mpdp_fit_count() {
    let mut checked = 0;
    let mut ok = true;
    for (p, seed) in [(12usize, 1u64), (25, 2), (40, 3)] {
        let ds = generate(&ModelSpec {
            n: 80,
            p,
            seed,
            ..m1(80, p)
        })
        .unwrap()
        .standardize()
        .unwrap();
        for forced in [None, Some(1), Some(3), Some(6)] {
            let config = SelectorConfig {
                forced_stages: forced,
                ..Default::default()
            };
            let trace = mpdp_select(&ds, &config).unwrap();
            let k = trace.stages.len() as u64;
            let p = p as u64;
            ok &= trace.subset_fits == k * p - k * (k - 1) / 2;
            for (i, st) in trace.stages.iter().enumerate() {
                let k = i as u64 + 1;
                ok &= st.subset_fits == k * p - k * (k - 1) / 2;
            }
            checked += 1;
        }
    }
    verdict(
        "AC-5",
        ok,
        format!("subset_fits = kp - k(k-1)/2 on {checked} runs"),
    );
}

#[test]
fn ac06_runtime_scaling() {
    let p_list = [100, 500, 1000];
    let single = with_threads(1, || benchmark_scaling(&p_list, 100, 4, 2, BASE_SEED))
        .unwrap()
        .unwrap();
    let multi = with_threads(4, || benchmark_scaling(&p_list, 100, 4, 1, BASE_SEED))
        .unwrap()
        .unwrap();
    let same = single
        .rows
        .iter()
        .zip(&multi.rows)
        .all(|(a, b)| a.fits_evaluated == b.fits_evaluated && a.selected == b.selected);
    let rows: Vec<String> = single
        .rows
        .iter()
        .map(|r| format!("p={} {:.3}s fits={}", r.p, r.seconds, r.fits_evaluated))
        .collect();
    verdict(
        "AC-6",
        (0.7..=1.3).contains(&single.slope) && same,
        format!(
            "log-log slope {:.3} (need [0.7, 1.3]); fits identical across 1/4 threads: {same}; {}",
            single.slope,
            rows.join(", ")
        ),
    );
}

/// `Y = X1^2 + X2^2 + e`, noise-to-signal 0.05, p = 6.
fn two_variable(seed: u64) -> Dataset {
    let n = 300;
    let p = 6;
    let base = generate(&ModelSpec {
        model: Model::M1,
        n,
        p,
        nsr: 0.0,
        seed,
        ..Default::default()
    })
    .unwrap();
    // Var(U1^2 + U2^2) = 2 (1/5 - 1/9) for U ~ Uniform[-1, 1].
    let sigma = (0.05_f64 * 2.0 * (1.0 / 5.0 - 1.0 / 9.0)).sqrt();
    let noise = Normal::new(0.0, sigma).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xa5a5);
    let x = base.x();
    let y = (0..n)
        .map(|i| x[(i, 0)].powi(2) + x[(i, 1)].powi(2) + noise.sample(&mut rng))
        .collect();
    Dataset::new(DMatrix::from_column_slice(n, p, x.as_slice()), y)
        .unwrap()
        .standardize()
        .unwrap()
}

#[test]
fn ac07_oracle_equivalence() {
    let config = SelectorConfig::default();
    let target = Subset::new(vec![0, 1]).unwrap();
    let mut agree = 0;
    let mut lines = Vec::new();
    assert_eq!(subset_count(6, 2), 21);
    for seed in 0..10 {
        let ds = two_variable(BASE_SEED + seed);
        let oracle = exhaustive_select(&ds, &config, 2).unwrap();
        let trace = novas_select(&ds, &config).unwrap();
        if oracle.subset == target && trace.final_subset == target {
            agree += 1;
        }
        lines.push(format!("{}/{}", oracle.subset, trace.final_subset));
    }
    verdict(
        "AC-7",
        agree >= 9,
        format!(
            "exhaustive and novas both {{1,2}} in {agree}/10 (need >= 9): {}",
            lines.join(" ")
        ),
    );
}

#[test]
fn ac08_estimator_exactness() {
    let n = 100;
    let mut worst_affine = 0.0f64;
    let mut worst_constant = 0.0f64;
    for d in 1..=3usize {
        for seed in 0..3 {
            let coef = [0.8, -1.7, 2.4];
            let ds = uniform_dataset(n, 3, BASE_SEED + seed, |x| {
                -0.5 + x.iter().zip(coef).take(d).map(|(v, c)| v * c).sum::<f64>()
            });
            let constant = ds.with_response(vec![2.75; n]).unwrap();
            let subset = Subset::new((0..d).collect()).unwrap();
            for h in BandwidthGrid::default().bandwidths(n, d) {
                for (pred, y) in loo_predict(&ds, &subset, h).unwrap().iter().zip(ds.y()) {
                    worst_affine = worst_affine.max((pred - y).abs());
                }
                for pred in loo_predict(&constant, &subset, h).unwrap() {
                    worst_constant = worst_constant.max((pred - 2.75).abs());
                }
            }
        }
    }
    verdict(
        "AC-8",
        worst_affine <= 1e-6 && worst_constant <= 1e-9,
        format!("max affine error {worst_affine:.2e} (<= 1e-6), constant {worst_constant:.2e} (<= 1e-9)"),
    );
}

#[test]
fn ac09_noise_calibration() {
    let draws = 100_000;
    let mut ok = true;
    let mut parts = Vec::new();
    let cases = [
        (Model::M1, 0.0),
        (Model::M2, 0.0),
        (Model::M3, 0.0),
        (Model::M4, 0.0),
        (Model::M5, 0.0),
        (Model::AlphaFamily, 0.0),
        (Model::AlphaFamily, 0.35),
        (Model::AlphaFamily, 1.0),
    ];
    for (model, alpha) in cases {
        for nsr in [0.05, 0.2] {
            let spec = ModelSpec {
                model,
                n: draws,
                p: 3,
                nsr,
                alpha,
                seed: BASE_SEED,
                ..Default::default()
            };
            let ds = generate(&spec).unwrap();
            let x = ds.x();
            let signal: Vec<f64> = (0..draws)
                .map(|i| spec.signal(x[(i, 0)], x[(i, 1)], x[(i, 2)]))
                .collect();
            let noise: Vec<f64> = ds.y().iter().zip(&signal).map(|(y, g)| y - g).collect();
            let ratio = variance(&noise) / variance(&signal);
            let rel = (ratio / nsr - 1.0).abs();
            ok &= rel <= 0.05;
            parts.push(format!("{model}(a={alpha},nsr={nsr}) {:.2}%", 100.0 * rel));
        }
    }
    let analytic = 4.0 / 15.0;
    let mc = signal_variance(Model::M1, 0.0);
    let mc_rel = (mc / analytic - 1.0).abs();
    ok &= mc_rel <= 0.01;
    verdict(
        "AC-9",
        ok,
        format!(
            "Var(m1) {mc:.5} vs 4/15 off {:.3}% (<= 1%); nsr deviations (<= 5%): {}",
            100.0 * mc_rel,
            parts.join(", ")
        ),
    );
}

fn variance(v: &[f64]) -> f64 {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len() - 1) as f64
}

#[test]
fn ac10_determinism_and_equivariance() {
    let ds = generate(&m1(100, 60)).unwrap().standardize().unwrap();
    let config = SelectorConfig::default();
    let traces: Vec<String> = [1, 2, 8]
        .into_iter()
        .flat_map(|threads| {
            let novas = with_threads(threads, || novas_select(&ds, &config))
                .unwrap()
                .unwrap();
            let mpdp = with_threads(threads, || mpdp_select(&ds, &config))
                .unwrap()
                .unwrap();
            [
                serde_json::to_string(&novas).unwrap(),
                serde_json::to_string(&mpdp).unwrap(),
            ]
        })
        .collect();
    let deterministic = traces.chunks(2).all(|c| c == &traces[..2]);

    let mut equivariant = 0;
    for seed in 0..5 {
        let spec = ModelSpec {
            seed: BASE_SEED + 100 + seed,
            ..m1(100, 30)
        };
        let ds = generate(&spec).unwrap().standardize().unwrap();
        let mut order: Vec<usize> = (0..30).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        // New column k holds old column order[k].
        let permuted = ds.permute_columns(&order).unwrap();
        let mut new_of_old = vec![0; 30];
        for (k, &old) in order.iter().enumerate() {
            new_of_old[old] = k;
        }
        let a = novas_select(&ds, &config).unwrap();
        let b = novas_select(&permuted, &config).unwrap();
        if a.final_subset.relabel(|j| new_of_old[j]) == b.final_subset
            && (a.final_score - b.final_score).abs() <= 1e-9 * a.final_score
        {
            equivariant += 1;
        }
    }
    verdict(
        "AC-10",
        deterministic && equivariant == 5,
        format!(
            "bit-identical traces at 1/2/8 workers: {deterministic}; column permutation \
             equivariance {equivariant}/5"
        ),
    );
}
