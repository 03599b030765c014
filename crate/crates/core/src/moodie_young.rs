//! Moodie–Young largest-candidate heuristic.
//!
//! Stations are filled one at a time. Among the schedulable tasks that still
//! fit the station's residual time, the longest is assigned (lowest id on
//! ties) and its matrix row deleted. When nothing schedulable fits, the next
//! station opens with a full cycle. The run ends when no task is schedulable.

use crate::adjust::AdjustedTimes;
use crate::error::Result;
use crate::model::{check_fits, Instance, LineBalance, TaskId, CAPACITY_EPS};
use crate::precedence::build_matrix;

/// One assignment decision, kept so a balance can be replayed and audited.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentStep {
    /// 1-based station index.
    pub station: usize,
    pub task: TaskId,
    pub residual_before: f64,
    /// The schedulable list at the moment of the decision.
    pub schedulable: Vec<TaskId>,
}

pub fn balance(instance: &Instance, times: &AdjustedTimes, cycle_time_per_unit: f64) -> Result<LineBalance> {
    balance_with_log(instance, times, cycle_time_per_unit).map(|(b, _)| b)
}

pub fn balance_with_log(
    instance: &Instance,
    times: &AdjustedTimes,
    cycle_time_per_unit: f64,
) -> Result<(LineBalance, Vec<AssignmentStep>)> {
    let t = times.times();
    balance_times(instance, &t, cycle_time_per_unit)
}

pub(crate) fn balance_times(
    instance: &Instance,
    t: &[f64],
    cycle: f64,
) -> Result<(LineBalance, Vec<AssignmentStep>)> {
    check_fits(t, cycle)?;
    let matrix = build_matrix(instance);
    let n = matrix.size();

    let mut removed = vec![false; n];
    let mut stations: Vec<Vec<TaskId>> = vec![Vec::new()];
    let mut residual = cycle;
    let mut log = Vec::with_capacity(n);

    loop {
        let schedulable: Vec<TaskId> = matrix.schedulable_mask(&removed).collect();
        if schedulable.is_empty() {
            break;
        }
        let pick = schedulable
            .iter()
            .copied()
            .filter(|&id| t[id - 1] <= residual + CAPACITY_EPS)
            .fold(None, |best: Option<TaskId>, id| match best {
                Some(b) if t[b - 1] >= t[id - 1] => Some(b),
                _ => Some(id),
            });
        let Some(task) = pick else {
            stations.push(Vec::new());
            residual = cycle;
            continue;
        };
        log.push(AssignmentStep {
            station: stations.len(),
            task,
            residual_before: residual,
            schedulable,
        });
        stations.last_mut().expect("at least one station").push(task);
        residual -= t[task - 1];
        removed[task - 1] = true;
    }

    stations.retain(|s| !s.is_empty());
    Ok((LineBalance::new(cycle, stations, t), log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjust::adjust_instance;
    use crate::error::Error;
    use crate::model::{PercentileConfig, TaskSpec};

    fn fixed(times: &[f64], edges: &[(TaskId, TaskId)]) -> (Instance, AdjustedTimes) {
        let inst = Instance::new(
            "t",
            1,
            times.iter().enumerate().map(|(i, &x)| TaskSpec::fixed(i + 1, x)).collect(),
            edges.iter().copied(),
        );
        let adj = adjust_instance(&inst, PercentileConfig::new(0.5, 0.0).unwrap()).unwrap();
        (inst, adj)
    }

    #[test]
    fn two_task_chain_shares_a_station() {
        let (inst, adj) = fixed(&[1.0, 1.0], &[(1, 2)]);
        let b = balance(&inst, &adj, 2.0).unwrap();
        assert_eq!(b.stations, vec![vec![1, 2]]);
    }

    #[test]
    fn exact_fit_is_assigned() {
        let (inst, adj) = fixed(&[0.4, 0.6], &[(1, 2)]);
        let b = balance(&inst, &adj, 1.0).unwrap();
        assert_eq!(b.station_count(), 1);
    }

    #[test]
    fn longest_first_and_id_ties() {
        // 2 and 3 tie at 0.5 after 1; 2 wins on id.
        let (inst, adj) = fixed(&[0.2, 0.5, 0.5, 0.7], &[(1, 2), (1, 3), (1, 4)]);
        let (b, log) = balance_with_log(&inst, &adj, 1.0).unwrap();
        assert_eq!(log[1].task, 4);
        assert_eq!(log[1].schedulable, vec![2, 3, 4]);
        assert_eq!(b.stations, vec![vec![1, 4], vec![2, 3]]);
    }

    #[test]
    fn infeasible_names_every_task() {
        let (inst, adj) = fixed(&[0.4, 1.5, 2.0], &[]);
        let err = balance(&inst, &adj, 1.0).unwrap_err();
        assert_eq!(err, Error::Infeasible { cycle: 1.0, tasks: vec![(2, 1.5), (3, 2.0)] });
    }

    #[test]
    fn log_replays() {
        let (inst, adj) = fixed(&[0.3, 0.6, 0.2, 0.5, 0.4], &[(1, 2), (1, 3), (3, 4), (2, 5), (4, 5)]);
        let (b, log) = balance_with_log(&inst, &adj, 1.0).unwrap();
        let mut done = std::collections::BTreeSet::new();
        let m = build_matrix(&inst);
        for step in &log {
            assert!(m.schedulable(&done).contains(&step.task));
            done.insert(step.task);
        }
        let flat: Vec<_> = b.stations.concat();
        assert_eq!(flat, log.iter().map(|s| s.task).collect::<Vec<_>>());
        assert!(b.violations(&inst, &adj.times()).is_empty());
    }
}
