use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use novas_bench::model1;
use novas_core::{
    loo_predict, mpdp_select, novas_select, select_bandwidth, BandwidthGrid, SelectorConfig, Subset,
};

fn loo(c: &mut Criterion) {
    let ds = model1(200, 10, 1);
    let mut group = c.benchmark_group("loo_predict");
    for d in [1usize, 2, 3, 5] {
        let subset = Subset::new((0..d).collect()).unwrap();
        let h = BandwidthGrid::default().bandwidths(ds.n(), d)[2];
        group.bench_with_input(BenchmarkId::from_parameter(d), &subset, |b, s| {
            b.iter(|| loo_predict(&ds, s, h).unwrap())
        });
    }
    group.finish();
}

fn bandwidth(c: &mut Criterion) {
    let ds = model1(100, 10, 2);
    let grid = BandwidthGrid::default();
    let subset = Subset::new(vec![0, 1, 2]).unwrap();
    c.bench_function("select_bandwidth/d3", |b| {
        b.iter(|| select_bandwidth(&ds, &subset, &grid).unwrap())
    });
}

fn selectors(c: &mut Criterion) {
    let mut group = c.benchmark_group("select");
    group.sample_size(10);
    for p in [50usize, 100] {
        let ds = model1(100, p, 3);
        let forced = SelectorConfig {
            forced_stages: Some(4),
            ..Default::default()
        };
        group.bench_with_input(BenchmarkId::new("novas_4_stages", p), &ds, |b, ds| {
            b.iter(|| novas_select(ds, &forced).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("mpdp", p), &ds, |b, ds| {
            b.iter(|| mpdp_select(ds, &SelectorConfig::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, loo, bandwidth, selectors);
criterion_main!(benches);
