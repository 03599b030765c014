use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use stochalb::{adjust_instance, bundled, exact, moodie_young, PercentileConfig, SolverLimits};
use stochalb_bench::layered_instance;

fn quantiles(c: &mut Criterion) {
    c.bench_function("normal_quantile_grid", |b| {
        b.iter(|| {
            (1..100)
                .map(|i| stochalb::stats::normal_quantile(black_box(i as f64 / 100.0)).unwrap())
                .sum::<f64>()
        })
    });
    c.bench_function("poisson_quantile_rate14", |b| {
        b.iter(|| stochalb::stats::poisson_quantile(black_box(0.95), black_box(14.0)).unwrap())
    });
}

fn balancing(c: &mut Criterion) {
    let shirt = bundled::shirt15();
    let times = adjust_instance(&shirt, PercentileConfig::default()).unwrap();
    c.bench_function("moodie_young_shirt15", |b| {
        b.iter(|| moodie_young::balance(&shirt, &times, black_box(1.0)).unwrap())
    });
    c.bench_function("exact_shirt15", |b| {
        b.iter(|| exact::solve(&shirt, &times, black_box(1.0), &SolverLimits::default()).unwrap())
    });

    let layered = layered_instance(20, 7);
    let lt = adjust_instance(&layered, PercentileConfig::new(0.5, 0.0).unwrap()).unwrap();
    c.bench_function("exact_layered20", |b| {
        b.iter(|| exact::solve(&layered, &lt, black_box(1.3), &SolverLimits::default()).unwrap())
    });
}

criterion_group!(benches, quantiles, balancing);
criterion_main!(benches);
