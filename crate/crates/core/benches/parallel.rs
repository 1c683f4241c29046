use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qgraph::asymptotics::{scan_windows, windows, ReferenceMode};
use qgraph::roots::{find_roots_with, RootOptions, SearchRegion};
use qgraph::secular::{Analytic, GraphSecular};
use qgraph::{fixtures, par, Parallelism, ScatteringModel, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

const MODES: [(&str, Parallelism); 2] = [("sequential", Parallelism::Sequential), ("parallel", Parallelism::Parallel)];

fn model(name: &str) -> ScatteringModel {
    ScatteringModel::new(fixtures::load_fixture(name).unwrap().graph).unwrap()
}

fn secular_grid(c: &mut Criterion) {
    let m = model("loop_mixed");
    let f = GraphSecular::cleared(&m);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let ks: Vec<C64> = (0..4096).map(|_| C64::new(rng.gen_range(0.1..30.0), rng.gen_range(-3.0..0.5))).collect();
    let mut g = c.benchmark_group("secular_grid");
    for (label, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| black_box(par::map(mode, &ks, |&k| f.eval(k).ok())))
        });
    }
    g.finish();
}

fn root_search(c: &mut Criterion) {
    let m = model("loop_deltaprime");
    let f = GraphSecular::cleared(&m);
    let region = SearchRegion::new(0.5, 30.0, -2.0, 0.05).unwrap();
    let mut g = c.benchmark_group("find_roots");
    g.sample_size(10);
    for (label, mode) in MODES {
        let opts = RootOptions { parallelism: mode, ..Default::default() };
        g.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| black_box(find_roots_with(&f, &region, 1e-10, &opts).unwrap()))
        });
    }
    g.finish();
}

fn window_scan(c: &mut Criterion) {
    let graph = fixtures::load_fixture("loop_delta_2").unwrap().graph;
    let w = windows(&graph, 3, 18);
    let mut g = c.benchmark_group("scan_windows");
    g.sample_size(10);
    for (label, mode) in MODES {
        g.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| black_box(scan_windows(&graph, &w, ReferenceMode::Standard, 2.0, mode).unwrap()))
        });
    }
    g.finish();
}

criterion_group!(benches, secular_grid, root_search, window_scan);
criterion_main!(benches);
