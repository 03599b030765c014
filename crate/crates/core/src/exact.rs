//! Exact SALBP-1 by station-oriented depth-first branch and bound.
//!
//! The integer program weights station `j` by `2^j`, which makes every
//! additional station cost more than all earlier ones combined. Its optimum
//! therefore uses the fewest stations and fills them as a prefix, so the
//! search minimises the station count directly and only ever opens stations
//! in order.
//!
//! Each node closes one station. Candidate loads are the maximal sets of
//! available tasks that fit the cycle: if a task could still be moved into an
//! earlier station, moving it never adds a station, so non-maximal loads can
//! be skipped. Loads are enumerated in topological position order, which
//! yields every set exactly once with precedence respected inside the
//! station. Pruning uses `closed + ceil(remaining / cycle)` against the
//! incumbent and a memo of the fewest stations seen per assigned set. The
//! first incumbent is the Moodie–Young balance.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::adjust::AdjustedTimes;
use crate::error::{Error, Result};
use crate::model::{capacity_lower_bound, check_fits, Instance, LineBalance, TaskId, CAPACITY_EPS};
use crate::moodie_young;
use crate::precedence::build_matrix;

/// Largest instance the bitset search supports.
pub const MAX_TASKS: usize = 128;

#[derive(Debug, Clone)]
pub struct SolverLimits {
    pub node_budget: u64,
    pub time_budget: Option<Duration>,
    /// Checked between node expansions; set it to abandon the search.
    pub cancel: Option<Arc<AtomicBool>>,
}

impl Default for SolverLimits {
    fn default() -> Self {
        Self {
            node_budget: 10_000_000,
            time_budget: None,
            cancel: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub balance: LineBalance,
    /// False when a budget ran out or the search was cancelled before proving optimality.
    pub optimal: bool,
    pub nodes: u64,
}

type Mask = u128;

struct Search<'a> {
    times: &'a [f64],
    cycle: f64,
    /// Task indices (0-based) in topological order.
    order: Vec<usize>,
    preds: Vec<Mask>,
    all: Mask,
    best: Option<Vec<Vec<usize>>>,
    best_count: usize,
    lower_bound: usize,
    memo: HashMap<Mask, usize>,
    nodes: u64,
    limits: &'a SolverLimits,
    started: Instant,
    stopped: bool,
}

impl Search<'_> {
    fn out_of_budget(&mut self) -> bool {
        if self.stopped {
            return true;
        }
        self.nodes += 1;
        if self.nodes > self.limits.node_budget {
            self.stopped = true;
        } else if self.nodes % 1024 == 1 {
            if let Some(limit) = self.limits.time_budget {
                if self.started.elapsed() > limit {
                    self.stopped = true;
                }
            }
            if let Some(flag) = &self.limits.cancel {
                if flag.load(Ordering::Relaxed) {
                    self.stopped = true;
                }
            }
        }
        self.stopped
    }

    fn remaining_time(&self, assigned: Mask) -> f64 {
        (0..self.times.len())
            .filter(|&i| assigned & (1 << i) == 0)
            .map(|i| self.times[i])
            .sum()
    }

    fn dfs(&mut self, assigned: Mask, stations: &mut Vec<Vec<usize>>) {
        if self.best_count <= self.lower_bound || self.out_of_budget() {
            return;
        }
        if assigned == self.all {
            if stations.len() < self.best_count {
                self.best_count = stations.len();
                self.best = Some(stations.clone());
            }
            return;
        }
        let closed = stations.len();
        let remaining = self.remaining_time(assigned);
        let bound = closed + ((remaining / self.cycle) - CAPACITY_EPS).ceil().max(1.0) as usize;
        if bound >= self.best_count {
            return;
        }
        match self.memo.get(&assigned) {
            Some(&seen) if seen <= closed => return,
            _ => {
                self.memo.insert(assigned, closed);
            }
        }

        let mut loads = Vec::new();
        let mut current = Vec::new();
        self.enumerate_loads(assigned, 0, self.cycle, &mut current, &mut loads);
        // Heavier loads first: good incumbents early.
        loads.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

        for (load, _) in loads {
            let mask = load.iter().fold(assigned, |m, &i| m | (1 << i));
            stations.push(load);
            self.dfs(mask, stations);
            stations.pop();
            if self.stopped {
                return;
            }
        }
    }

    /// Collect maximal station loads reachable from `assigned`, adding tasks
    /// in increasing topological position from `from`.
    fn enumerate_loads(
        &mut self,
        assigned: Mask,
        from: usize,
        residual: f64,
        current: &mut Vec<usize>,
        out: &mut Vec<(Vec<usize>, f64)>,
    ) {
        if self.out_of_budget() {
            return;
        }
        let fits = |s: &Self, i: usize| {
            assigned & (1 << i) == 0
                && s.preds[i] & !assigned == 0
                && s.times[i] <= residual + CAPACITY_EPS
        };
        let mut extended = false;
        for pos in from..self.order.len() {
            let i = self.order[pos];
            if fits(self, i) {
                extended = true;
                current.push(i);
                self.enumerate_loads(assigned | (1 << i), pos + 1, residual - self.times[i], current, out);
                current.pop();
                if self.stopped {
                    return;
                }
            }
        }
        if extended || current.is_empty() {
            return;
        }
        // Tasks before `from` were skipped by position, not by fit; a load is
        // only maximal if none of them fits either.
        let maximal = self.order[..from].iter().all(|&i| !fits(self, i));
        if maximal {
            let load = self.cycle - residual;
            out.push((current.clone(), load));
        }
    }
}

/// Minimum-station balance under the cycle time.
pub fn solve(
    instance: &Instance,
    times: &AdjustedTimes,
    cycle_time_per_unit: f64,
    limits: &SolverLimits,
) -> Result<ExactSolution> {
    let t = times.times();
    solve_times(instance, &t, cycle_time_per_unit, limits)
}

pub(crate) fn solve_times(
    instance: &Instance,
    t: &[f64],
    cycle: f64,
    limits: &SolverLimits,
) -> Result<ExactSolution> {
    check_fits(t, cycle)?;
    let n = t.len();
    if n > MAX_TASKS {
        return Err(Error::Config(format!(
            "exact solver supports at most {MAX_TASKS} tasks, instance has {n}"
        )));
    }
    let (heuristic, _) = moodie_young::balance_times(instance, t, cycle)?;
    let lower_bound = capacity_lower_bound(t, cycle);
    if heuristic.station_count() <= lower_bound {
        return Ok(ExactSolution {
            balance: heuristic,
            optimal: true,
            nodes: 0,
        });
    }

    let matrix = build_matrix(instance);
    let order: Vec<usize> = matrix.topological_order().into_iter().map(|id| id - 1).collect();
    let preds: Vec<Mask> = (1..=n)
        .map(|j| matrix.predecessors(j).fold(0, |m, i| m | (1 << (i - 1))))
        .collect();
    let all: Mask = if n == MAX_TASKS { Mask::MAX } else { (1 << n) - 1 };

    let mut search = Search {
        times: t,
        cycle,
        order,
        preds,
        all,
        best: None,
        best_count: heuristic.station_count(),
        lower_bound,
        memo: HashMap::new(),
        nodes: 0,
        limits,
        started: Instant::now(),
        stopped: false,
    };
    search.dfs(0, &mut Vec::new());

    let optimal = !search.stopped || search.best_count <= lower_bound;
    let nodes = search.nodes;
    let balance = match search.best {
        Some(stations) => {
            let stations: Vec<Vec<TaskId>> = stations
                .into_iter()
                .map(|s| s.into_iter().map(|i| i + 1).collect())
                .collect();
            LineBalance::new(cycle, stations, t)
        }
        None => heuristic,
    };
    Ok(ExactSolution {
        balance,
        optimal,
        nodes,
    })
}
