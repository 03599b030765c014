//! Independent oracles for the integration and acceptance tests. Nothing
//! here calls into the crate's numeric code.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stochalb::{Instance, TaskId, TaskSpec};

/// erf by its Maclaurin series; accurate to ~1e-13 for |x| <= 3.
pub fn erf_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = x;
    let x2 = x * x;
    let mut n = 0.0;
    while term.abs() > 1e-18 * sum.abs().max(1e-300) {
        n += 1.0;
        term *= -x2 / n;
        sum += term / (2.0 * n + 1.0);
        if n > 400.0 {
            break;
        }
    }
    2.0 / std::f64::consts::PI.sqrt() * sum
}

pub fn normal_cdf_series(z: f64) -> f64 {
    0.5 * (1.0 + erf_series(z / std::f64::consts::SQRT_2))
}

/// Bisection on the series CDF over [-4, 4].
pub fn normal_quantile_bisect(p: f64) -> f64 {
    let (mut lo, mut hi) = (-4.0_f64, 4.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if normal_cdf_series(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Poisson CDF from explicit powers and factorials.
pub fn poisson_cdf_direct(k: u64, rate: f64) -> f64 {
    let mut fact = 1.0_f64;
    let mut sum = 0.0;
    for i in 0..=k {
        if i > 0 {
            fact *= i as f64;
        }
        sum += (-rate).exp() * rate.powi(i as i32) / fact;
    }
    sum
}

pub fn poisson_quantile_direct(p: f64, rate: f64) -> u64 {
    if p == 0.0 {
        return 0;
    }
    (0..170).find(|&k| poisson_cdf_direct(k, rate) >= p).expect("quantile below 170")
}

/// Minimum station count by shortest path over assigned-task subsets, trying
/// every subset of unassigned tasks as the next station (3^n work).
pub fn brute_force_min_stations(n: usize, edges: &[(TaskId, TaskId)], times: &[f64], cycle: f64) -> usize {
    assert!(n <= 16);
    let full: u32 = (1u32 << n) - 1;
    let preds: Vec<u32> = (0..n)
        .map(|j| edges.iter().filter(|e| e.1 == j + 1).fold(0, |m, e| m | 1 << (e.0 - 1)))
        .collect();
    let load = |s: u32| (0..n).filter(|i| s >> i & 1 == 1).map(|i| times[i]).sum::<f64>();

    let mut dist: HashMap<u32, usize> = HashMap::new();
    dist.insert(0, 0);
    let mut frontier = vec![0u32];
    let mut depth = 0;
    while !frontier.is_empty() {
        if frontier.contains(&full) {
            return depth;
        }
        depth += 1;
        let mut next = Vec::new();
        for &done in &frontier {
            let free = full & !done;
            let mut s = free;
            while s != 0 {
                let ok = load(s) <= cycle + 1e-9
                    && (0..n).filter(|i| s >> i & 1 == 1).all(|i| preds[i] & !(done | s) == 0);
                if ok {
                    let to = done | s;
                    if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(to) {
                        e.insert(depth);
                        next.push(to);
                    }
                }
                s = (s - 1) & free;
            }
        }
        frontier = next;
    }
    panic!("no feasible balance");
}

/// A random acyclic instance with deterministic, defect-free tasks and a cycle
/// time no shorter than the longest task.
pub struct RandomCase {
    pub instance: Instance,
    pub times: Vec<f64>,
    pub cycle: f64,
}

pub fn random_case(rng: &mut ChaCha8Rng, max_tasks: usize) -> RandomCase {
    let n = rng.random_range(1..=max_tasks);
    let times: Vec<f64> = (0..n).map(|_| (rng.random_range(0.05..1.0f64) * 100.0).round() / 100.0).collect();
    let mut edges = Vec::new();
    for j in 2..=n {
        for i in 1..j {
            if rng.random_bool(0.25) {
                edges.push((i, j));
            }
        }
    }
    let longest = times.iter().cloned().fold(0.0, f64::max);
    let cycle = longest.max(rng.random_range(0.8..2.0));
    let tasks = times.iter().enumerate().map(|(i, &t)| TaskSpec::fixed(i + 1, t)).collect();
    RandomCase {
        instance: Instance::new(format!("random{n}"), 10, tasks, edges),
        times,
        cycle,
    }
}

pub fn case_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
