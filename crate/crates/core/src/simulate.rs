//! Monte Carlo evaluation of a balanced line, one lot per run.
//!
//! Each station gets a budget of `lot_size * cycle` minutes per lot. The
//! first station receives the whole lot; later stations receive whatever the
//! previous station finished. A station's demand is every item's sampled
//! processing time for its tasks, plus rework: each task draws a defect count
//! from `Poisson(v * N)` for its `N` input items and every defect costs a
//! sampled dismantle plus a sampled reprocess at the same station. A station
//! whose demand overruns the budget completes `floor(N * budget / demand)`
//! items and the rest are scrapped.
//!
//! Run efficiency is the smaller of time efficiency (`1 - idle / available`)
//! and yield efficiency (finished units over launched units).
//!
//! Randomness is keyed per run by `seed.derive(run)` and, within a run, per
//! task: stream `2 * id` feeds item processing times and `2 * id + 1` feeds
//! defect counts and rework. Station inputs therefore consume prefixes of the
//! same streams regardless of what happens upstream.

use rayon::prelude::*;

use crate::adjust::defect_probability;
use crate::model::{Instance, LineBalance};
use crate::stats::{sample_normal, sample_poisson, PoissonParams, RngSeed};

/// Relative tolerance for treating a station's demand as exactly its budget.
const BUDGET_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationConfig {
    pub runs: usize,
    pub seed: RngSeed,
    /// Launch this many units per lot instead of the instance's lot size.
    pub lot_size: Option<u64>,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self {
            runs: 100,
            seed: RngSeed(0),
            lot_size: None,
        }
    }
}

/// Outcome of one simulated lot.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub time_efficiency: f64,
    pub yield_efficiency: f64,
    pub efficiency: f64,
    /// Idle minutes per station over the lot.
    pub idle: Vec<f64>,
    /// Units entering each station.
    pub inputs: Vec<u64>,
    /// Units leaving the last station.
    pub output: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation; zero for a single run.
    pub sd: f64,
}

impl Summary {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let v: Vec<f64> = values.into_iter().collect();
        if v.is_empty() {
            return Self::default();
        }
        let n = v.len() as f64;
        // Shifted by the first value so constant samples give an exact mean.
        let shift = v[0];
        let mean = shift + v.iter().map(|x| x - shift).sum::<f64>() / n;
        let sd = if v.len() > 1 {
            (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        Self { mean, sd }
    }

    pub fn std_error(&self, runs: usize) -> f64 {
        self.sd / (runs.max(1) as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub runs: Vec<RunRecord>,
    pub time_efficiency: Summary,
    pub yield_efficiency: Summary,
    pub efficiency: Summary,
    /// Mean idle minutes per station.
    pub mean_idle: Vec<f64>,
    pub seed: RngSeed,
    pub cycle_time_per_unit: f64,
    pub lot_size: u64,
}

/// Simulate one lot of `lot_size` units through the balanced line.
pub fn simulate_lot(balance: &LineBalance, instance: &Instance, lot_size: u64, run_seed: RngSeed) -> RunRecord {
    let budget = lot_size as f64 * balance.cycle_time_per_unit;
    let tol = BUDGET_EPS * budget.max(1.0);
    let stations = balance.station_count();

    let mut idle = Vec::with_capacity(stations);
    let mut inputs = Vec::with_capacity(stations);
    let mut flow = lot_size;

    for tasks in &balance.stations {
        inputs.push(flow);
        let mut demand = 0.0;
        for &id in tasks {
            let task = instance.task(id);
            let mut items = run_seed.substream(2 * id as u64);
            for _ in 0..flow {
                demand += sample_normal(task.proc, &mut items);
            }
            let mut rework = run_seed.substream(2 * id as u64 + 1);
            let rate = defect_probability(task, instance.lot_size) * flow as f64;
            let defects = sample_poisson(PoissonParams { rate }, &mut rework);
            for _ in 0..defects {
                demand += sample_normal(task.dismantle, &mut rework);
                demand += sample_normal(task.proc, &mut rework);
            }
        }
        if demand <= budget + tol {
            idle.push(if budget - demand <= tol { 0.0 } else { budget - demand });
        } else {
            idle.push(0.0);
            flow = (flow as f64 * budget / demand).floor() as u64;
        }
    }

    let available = stations as f64 * budget;
    let time_efficiency = if available > 0.0 {
        (1.0 - idle.iter().sum::<f64>() / available).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let yield_efficiency = if lot_size > 0 {
        (flow as f64 / lot_size as f64).clamp(0.0, 1.0)
    } else {
        0.0
    };
    RunRecord {
        time_efficiency,
        yield_efficiency,
        efficiency: time_efficiency.min(yield_efficiency),
        idle,
        inputs,
        output: flow,
    }
}

/// Run `config.runs` independent lots. Runs execute in parallel; the report
/// is assembled in run order, so it does not depend on the thread count.
pub fn simulate(balance: &LineBalance, instance: &Instance, config: &SimulationConfig) -> SimulationReport {
    let lot_size = config.lot_size.unwrap_or(instance.lot_size);
    let runs: Vec<RunRecord> = (0..config.runs)
        .into_par_iter()
        .map(|r| simulate_lot(balance, instance, lot_size, config.seed.derive(r as u64)))
        .collect();

    let stations = balance.station_count();
    let mut mean_idle = vec![0.0; stations];
    for run in &runs {
        for (acc, x) in mean_idle.iter_mut().zip(&run.idle) {
            *acc += x;
        }
    }
    if !runs.is_empty() {
        mean_idle.iter_mut().for_each(|x| *x /= runs.len() as f64);
    }

    SimulationReport {
        time_efficiency: Summary::of(runs.iter().map(|r| r.time_efficiency)),
        yield_efficiency: Summary::of(runs.iter().map(|r| r.yield_efficiency)),
        efficiency: Summary::of(runs.iter().map(|r| r.efficiency)),
        mean_idle,
        runs,
        seed: config.seed,
        cycle_time_per_unit: balance.cycle_time_per_unit,
        lot_size,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TaskSpec;
    use crate::stats::NormalParams;

    fn line(times: &[f64], lot: u64) -> Instance {
        Instance::new(
            "det",
            lot,
            times.iter().enumerate().map(|(i, &t)| TaskSpec::fixed(i + 1, t)).collect(),
            (1..times.len()).map(|i| (i, i + 1)),
        )
    }

    #[test]
    fn perfectly_loaded_line_scores_one() {
        let inst = line(&[0.4, 0.6, 1.0, 0.7, 0.3], 50);
        let t: Vec<f64> = inst.tasks.iter().map(|t| t.proc.mean).collect();
        let b = LineBalance::new(1.0, vec![vec![1, 2], vec![3], vec![4, 5]], &t);
        let r = simulate_lot(&b, &inst, 50, RngSeed(1));
        assert_eq!(r.time_efficiency, 1.0);
        assert_eq!(r.yield_efficiency, 1.0);
        assert_eq!(r.efficiency, 1.0);
    }

    #[test]
    fn half_idle_station() {
        let inst = line(&[0.5, 1.0], 10);
        let b = LineBalance::new(1.0, vec![vec![1], vec![2]], &[0.5, 1.0]);
        let r = simulate_lot(&b, &inst, 10, RngSeed(1));
        assert_eq!(r.idle, vec![5.0, 0.0]);
        assert_eq!(r.time_efficiency, 0.75);
        assert_eq!(r.yield_efficiency, 1.0);
        assert_eq!(r.efficiency, 0.75);
    }

    #[test]
    fn overrun_halves_output() {
        let inst = line(&[2.0, 0.5], 10);
        let b = LineBalance::new(1.0, vec![vec![1], vec![2]], &[2.0, 0.5]);
        let r = simulate_lot(&b, &inst, 10, RngSeed(1));
        assert_eq!(r.inputs, vec![10, 5]);
        assert_eq!(r.output, 5);
        assert_eq!(r.yield_efficiency, 0.5);
        // Station 2 works 2.5 of its 10 minutes.
        assert_eq!(r.idle, vec![0.0, 7.5]);
    }

    #[test]
    fn deterministic_line_has_zero_spread() {
        let inst = line(&[0.3, 0.5, 0.8], 20);
        let b = LineBalance::new(1.0, vec![vec![1, 2], vec![3]], &[0.3, 0.5, 0.8]);
        let rep = simulate(&b, &inst, &SimulationConfig { runs: 25, seed: RngSeed(5), lot_size: None });
        assert_eq!(rep.efficiency.sd, 0.0);
        assert!(rep.runs.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn defect_rate_follows_actual_input() {
        // All items lost at station 1, so station 2 sees no input and no defects.
        let mut inst = line(&[5.0, 0.1], 10);
        inst.tasks[1] = TaskSpec::new(2, NormalParams::new(0.1, 0.0), NormalParams::new(1.0, 0.0), 8.0);
        let b = LineBalance::new(0.01, vec![vec![1], vec![2]], &[5.0, 0.1]);
        let r = simulate_lot(&b, &inst, 10, RngSeed(3));
        assert_eq!(r.inputs, vec![10, 0]);
        assert_eq!(r.idle[1], 10.0 * 0.01);
        assert_eq!(r.yield_efficiency, 0.0);
    }

    #[test]
    fn outputs_never_grow_along_the_line() {
        let inst = Instance::new(
            "s",
            40,
            (1..=4)
                .map(|i| TaskSpec::new(i, NormalParams::new(0.5, 0.2), NormalParams::new(0.8, 0.3), 6.0))
                .collect(),
            [(1, 2), (2, 3), (3, 4)],
        );
        let b = LineBalance::new(0.8, vec![vec![1], vec![2], vec![3], vec![4]], &[0.6; 4]);
        let rep = simulate(&b, &inst, &SimulationConfig { runs: 50, seed: RngSeed(11), lot_size: None });
        for r in &rep.runs {
            assert!(r.inputs.windows(2).all(|w| w[0] >= w[1]));
            assert!(*r.inputs.last().unwrap() >= r.output);
            assert!((0.0..=1.0).contains(&r.time_efficiency));
            assert!((0.0..=1.0).contains(&r.yield_efficiency));
            assert_eq!(r.efficiency, r.time_efficiency.min(r.yield_efficiency));
        }
    }
}
