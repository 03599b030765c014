use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use stochalb::{adjust_instance, bundled, moodie_young, simulate, PercentileConfig, RngSeed, SimulationConfig};

fn lots(c: &mut Criterion) {
    let shirt = bundled::shirt15();
    let times = adjust_instance(&shirt, PercentileConfig::default()).unwrap();
    let balance = moodie_young::balance(&shirt, &times, 2.0).unwrap();
    c.bench_function("simulate_lot_shirt15", |b| {
        b.iter(|| stochalb::simulate::simulate_lot(&balance, &shirt, 100, black_box(RngSeed(3))))
    });
    let config = SimulationConfig {
        runs: 100,
        seed: RngSeed(1),
        lot_size: None,
    };
    c.bench_function("simulate_100_runs_shirt15", |b| {
        b.iter(|| simulate(&balance, &shirt, black_box(&config)))
    });
}

criterion_group!(benches, lots);
criterion_main!(benches);
