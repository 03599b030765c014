//! Shared fixtures for the criterion benches.

use stochalb::{Instance, TaskSpec};

/// A layered random-looking instance of `n` deterministic tasks, built from a
/// fixed linear congruential sequence so every bench run sees the same input.
pub fn layered_instance(n: usize, seed: u64) -> Instance {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 33) as f64 / (1u64 << 31) as f64
    };
    let tasks = (1..=n).map(|i| TaskSpec::fixed(i, 0.1 + 0.8 * next())).collect();
    let mut edges = Vec::new();
    for j in 2..=n {
        for i in 1..j {
            if next() < 2.0 / j as f64 {
                edges.push((i, j));
            }
        }
    }
    Instance::new(format!("layered{n}"), 1, tasks, edges)
}
