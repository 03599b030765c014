//! Adjusted processing times.
//!
//! A task's adjusted time is its percentile processing time plus the expected
//! rework it causes at the chosen defect percentile:
//!
//! ```text
//! adjusted = (mu + z * sigma) + (K / L) * ((mu_d + mu) + z * sqrt(sigma_d^2 + sigma^2))
//! ```
//!
//! where `z` is the `p1` normal quantile, `K` the `p2` quantile of
//! `Poisson(v * L)` and `v` the per-unit defect probability. Rework is the
//! sum of dismantling and redoing the task, so its spread combines both
//! variances. Values are kept at full precision; rounding is a display concern.

use crate::error::Result;
use crate::model::{Instance, PercentileConfig, TaskId, TaskSpec};
use crate::stats::{normal_quantile, poisson_quantile};

/// Per-unit probability that `task` produces a defect.
pub fn defect_probability(task: &TaskSpec, lot_size: u64) -> f64 {
    task.mean_defects_per_lot / lot_size as f64
}

/// Breakdown of one task's adjusted time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaskAdjustment {
    pub id: TaskId,
    /// `mu + z * sigma`, floored at zero.
    pub base: f64,
    /// Defect count at the `p2` percentile.
    pub defects: u64,
    /// Revised rework time, floored at zero.
    pub rework: f64,
    pub adjusted: f64,
}

fn components(task: &TaskSpec, lot_size: u64, config: PercentileConfig) -> Result<TaskAdjustment> {
    let z = normal_quantile(config.p1)?;
    let rate = defect_probability(task, lot_size) * lot_size as f64;
    let defects = poisson_quantile(config.p2, rate)?;

    let base = (task.proc.mean + z * task.proc.sd).max(0.0);
    let rework_mean = task.dismantle.mean + task.proc.mean;
    let rework_sd = task.dismantle.sd.hypot(task.proc.sd);
    let rework = if defects == 0 {
        0.0
    } else {
        (defects as f64 / lot_size as f64 * (rework_mean + z * rework_sd)).max(0.0)
    };
    Ok(TaskAdjustment {
        id: task.id,
        base,
        defects,
        rework,
        adjusted: base + rework,
    })
}

/// Expected rework minutes per unit attributed to `task`.
pub fn revised_rework_time(task: &TaskSpec, lot_size: u64, config: PercentileConfig) -> Result<f64> {
    Ok(components(task, lot_size, config)?.rework)
}

pub fn adjusted_time(task: &TaskSpec, lot_size: u64, config: PercentileConfig) -> Result<f64> {
    Ok(components(task, lot_size, config)?.adjusted)
}

/// Adjusted times for a whole instance.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjustedTimes {
    pub tasks: Vec<TaskAdjustment>,
    pub config: PercentileConfig,
    pub lot_size: u64,
}

impl AdjustedTimes {
    /// Adjusted time per task, indexed by `id - 1`.
    pub fn times(&self) -> Vec<f64> {
        self.tasks.iter().map(|t| t.adjusted).collect()
    }

    pub fn get(&self, id: TaskId) -> Option<&TaskAdjustment> {
        self.tasks.get(id.checked_sub(1)?)
    }

    pub fn total(&self) -> f64 {
        self.tasks.iter().map(|t| t.adjusted).sum()
    }

    pub fn max(&self) -> f64 {
        self.tasks.iter().map(|t| t.adjusted).fold(0.0, f64::max)
    }
}

pub fn adjust_instance(instance: &Instance, config: PercentileConfig) -> Result<AdjustedTimes> {
    let tasks = instance
        .tasks
        .iter()
        .map(|t| components(t, instance.lot_size, config))
        .collect::<Result<Vec<_>>>()?;
    Ok(AdjustedTimes {
        tasks,
        config,
        lot_size: instance.lot_size,
    })
}
