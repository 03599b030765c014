//! Instances, percentile configuration and line balances.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result, ValidationIssue};
use crate::stats::NormalParams;

/// 1-based task identifier.
pub type TaskId = usize;

/// Slack used for every capacity comparison on adjusted times.
pub const CAPACITY_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct TaskSpec {
    pub id: TaskId,
    /// Processing time per unit, minutes. Inspection time is part of it.
    pub proc: NormalParams,
    /// Time to undo a defective task before it is redone, minutes.
    pub dismantle: NormalParams,
    /// Expected defects this task generates per lot (`v * L`).
    pub mean_defects_per_lot: f64,
}

impl TaskSpec {
    pub fn new(id: TaskId, proc: NormalParams, dismantle: NormalParams, mean_defects_per_lot: f64) -> Self {
        Self {
            id,
            proc,
            dismantle,
            mean_defects_per_lot,
        }
    }

    /// A deterministic, defect-free task.
    pub fn fixed(id: TaskId, time: f64) -> Self {
        Self::new(id, NormalParams::new(time, 0.0), NormalParams::new(0.0, 0.0), 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    /// Free-form data lineage note, e.g. `reconstructed`.
    pub provenance: Option<String>,
    /// Published adjusted times to compare against, one per task.
    pub reference_adjusted: Option<Vec<f64>>,
    pub lot_size: u64,
    pub tasks: Vec<TaskSpec>,
    /// Immediate-precedence pairs `(pred, succ)`.
    pub edges: BTreeSet<(TaskId, TaskId)>,
}

impl Instance {
    pub fn new(name: impl Into<String>, lot_size: u64, tasks: Vec<TaskSpec>, edges: impl IntoIterator<Item = (TaskId, TaskId)>) -> Self {
        Self {
            name: name.into(),
            provenance: None,
            reference_adjusted: None,
            lot_size,
            tasks,
            edges: edges.into_iter().collect(),
        }
    }

    pub fn task_count(&self) -> usize {
        self.tasks.len()
    }

    pub fn task(&self, id: TaskId) -> &TaskSpec {
        &self.tasks[id - 1]
    }

    /// Check every instance invariant and return the instance unchanged, or
    /// all violations found.
    pub fn validate(self) -> Result<Instance> {
        let issues = self.issues();
        if issues.is_empty() {
            Ok(self)
        } else {
            Err(Error::Invalid(issues))
        }
    }

    pub fn issues(&self) -> Vec<ValidationIssue> {
        let mut issues = Vec::new();
        if self.tasks.is_empty() {
            issues.push(ValidationIssue::NoTasks);
        }
        if self.lot_size == 0 {
            issues.push(ValidationIssue::NonPositiveLotSize(self.lot_size));
        }

        let mut seen = BTreeSet::new();
        for (pos, t) in self.tasks.iter().enumerate() {
            if !seen.insert(t.id) {
                issues.push(ValidationIssue::DuplicateId(t.id));
            } else if t.id != pos + 1 {
                issues.push(ValidationIssue::NonContiguousId {
                    position: pos + 1,
                    expected: pos + 1,
                    found: t.id,
                });
            }
            let checks: [(&'static str, f64); 5] = [
                ("mean_proc", t.proc.mean),
                ("sd_proc", t.proc.sd),
                ("mean_dismantle", t.dismantle.mean),
                ("sd_dismantle", t.dismantle.sd),
                ("mean_defects_per_lot", t.mean_defects_per_lot),
            ];
            for (field, value) in checks {
                if !(value >= 0.0 && value.is_finite()) {
                    issues.push(ValidationIssue::BadTaskParameter { task: t.id, field, value });
                }
            }
        }

        let n = self.tasks.len();
        let known = |id: TaskId| id >= 1 && id <= n;
        for &(from, to) in &self.edges {
            if from == to {
                issues.push(ValidationIssue::SelfLoop(from));
                continue;
            }
            for missing in [from, to] {
                if !known(missing) {
                    issues.push(ValidationIssue::DanglingEdge { from, to, missing });
                }
            }
        }
        if let Some(cycle) = find_cycle(&self.edges) {
            issues.push(ValidationIssue::Cycle(cycle));
        }
        issues
    }
}

/// One witness cycle in the edge relation (first node repeated at the end),
/// ignoring self loops.
fn find_cycle(edges: &BTreeSet<(TaskId, TaskId)>) -> Option<Vec<TaskId>> {
    let mut succ: BTreeMap<TaskId, Vec<TaskId>> = BTreeMap::new();
    for &(a, b) in edges {
        if a != b {
            succ.entry(a).or_default().push(b);
            succ.entry(b).or_default();
        }
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let mut mark: BTreeMap<TaskId, Mark> = succ.keys().map(|&k| (k, Mark::New)).collect();

    for &root in succ.keys() {
        if mark[&root] != Mark::New {
            continue;
        }
        // (node, next child index)
        let mut stack: Vec<(TaskId, usize)> = vec![(root, 0)];
        mark.insert(root, Mark::Open);
        while let Some(&mut (node, ref mut child)) = stack.last_mut() {
            let children = &succ[&node];
            if *child < children.len() {
                let next = children[*child];
                *child += 1;
                match mark[&next] {
                    Mark::New => {
                        mark.insert(next, Mark::Open);
                        stack.push((next, 0));
                    }
                    Mark::Open => {
                        let start = stack.iter().position(|&(v, _)| v == next).unwrap();
                        let mut cycle: Vec<TaskId> = stack[start..].iter().map(|&(v, _)| v).collect();
                        cycle.push(next);
                        return Some(cycle);
                    }
                    Mark::Done => {}
                }
            } else {
                mark.insert(node, Mark::Done);
                stack.pop();
            }
        }
    }
    None
}

/// The percentile pair: `p1` for normal task times, `p2` for Poisson defect counts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PercentileConfig {
    pub p1: f64,
    pub p2: f64,
}

impl PercentileConfig {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        if !(p1 > 0.0 && p1 < 1.0) {
            return Err(Error::Config(format!("p1 must lie in (0, 1), got {p1}")));
        }
        if !(0.0..1.0).contains(&p2) {
            return Err(Error::Config(format!("p2 must lie in [0, 1), got {p2}")));
        }
        Ok(Self { p1, p2 })
    }
}

impl Default for PercentileConfig {
    fn default() -> Self {
        Self { p1: 0.5, p2: 0.5 }
    }
}

/// Tasks assigned to ordered workstations.
#[derive(Debug, Clone, PartialEq)]
pub struct LineBalance {
    pub cycle_time_per_unit: f64,
    /// Task ids per station, in assignment order.
    pub stations: Vec<Vec<TaskId>>,
    /// Sum of adjusted times per station.
    pub loads: Vec<f64>,
}

impl LineBalance {
    /// Build a balance from station contents; `times[id - 1]` is the time of task `id`.
    pub fn new(cycle_time_per_unit: f64, stations: Vec<Vec<TaskId>>, times: &[f64]) -> Self {
        let loads = stations
            .iter()
            .map(|s| s.iter().map(|&id| times[id - 1]).sum())
            .collect();
        Self {
            cycle_time_per_unit,
            stations,
            loads,
        }
    }

    pub fn station_count(&self) -> usize {
        self.stations.len()
    }

    /// Idle time per unit at each station.
    pub fn idle(&self) -> Vec<f64> {
        self.loads
            .iter()
            .map(|l| (self.cycle_time_per_unit - l).max(0.0))
            .collect()
    }

    /// 1-based station index for each task, indexed by `id - 1`.
    pub fn station_of(&self, task_count: usize) -> Vec<Option<usize>> {
        let mut at = vec![None; task_count];
        for (s, tasks) in self.stations.iter().enumerate() {
            for &id in tasks {
                if (1..=task_count).contains(&id) {
                    at[id - 1] = Some(s + 1);
                }
            }
        }
        at
    }

    /// Every balance invariant violated against `instance` and `times`.
    pub fn violations(&self, instance: &Instance, times: &[f64]) -> Vec<String> {
        let n = instance.task_count();
        let mut out = Vec::new();
        let mut count = vec![0usize; n];
        for (s, tasks) in self.stations.iter().enumerate() {
            if tasks.is_empty() {
                out.push(format!("station {} is empty", s + 1));
            }
            for &id in tasks {
                if (1..=n).contains(&id) {
                    count[id - 1] += 1;
                } else {
                    out.push(format!("station {} holds unknown task {id}", s + 1));
                }
            }
        }
        for (i, &c) in count.iter().enumerate() {
            if c != 1 {
                out.push(format!("task {} assigned {c} times", i + 1));
            }
        }
        let at = self.station_of(n);
        for &(a, b) in &instance.edges {
            if let (Some(sa), Some(sb)) = (at[a - 1], at[b - 1]) {
                if sa > sb {
                    out.push(format!("edge {a} -> {b} runs backwards (station {sa} > {sb})"));
                } else if sa == sb {
                    let pos = |x| self.stations[sa - 1].iter().position(|&t| t == x);
                    if pos(a) > pos(b) {
                        out.push(format!("edge {a} -> {b} out of order inside station {sa}"));
                    }
                }
            }
        }
        for (s, tasks) in self.stations.iter().enumerate() {
            let load: f64 = tasks.iter().filter(|&&id| (1..=n).contains(&id)).map(|&id| times[id - 1]).sum();
            if load > self.cycle_time_per_unit + CAPACITY_EPS {
                out.push(format!(
                    "station {} load {load} exceeds cycle {}",
                    s + 1,
                    self.cycle_time_per_unit
                ));
            }
            if (load - self.loads.get(s).copied().unwrap_or(f64::NAN)).abs() > CAPACITY_EPS {
                out.push(format!("station {} recorded load disagrees with task times", s + 1));
            }
        }
        if self.loads.len() != self.stations.len() {
            out.push("loads and stations differ in length".into());
        }
        out
    }
}

/// `ceil(sum(times) / cycle)`, the simple capacity bound on station count.
pub fn capacity_lower_bound(times: &[f64], cycle: f64) -> usize {
    let total: f64 = times.iter().sum();
    if total <= 0.0 {
        return usize::from(!times.is_empty());
    }
    ((total / cycle) - CAPACITY_EPS).ceil().max(1.0) as usize
}

/// Tasks whose time cannot fit into an empty station.
pub(crate) fn check_fits(times: &[f64], cycle: f64) -> Result<()> {
    if !(cycle > 0.0 && cycle.is_finite()) {
        return Err(Error::Config(format!("cycle time must be positive, got {cycle}")));
    }
    let tasks: Vec<(TaskId, f64)> = times
        .iter()
        .enumerate()
        .filter(|(_, &t)| t > cycle + CAPACITY_EPS)
        .map(|(i, &t)| (i + 1, t))
        .collect();
    if tasks.is_empty() {
        Ok(())
    } else {
        Err(Error::Infeasible { cycle, tasks })
    }
}
