//! Assembly line balancing under stochastic task times and in-line rework.
//!
//! Task times are inflated to percentile-based *adjusted processing times*
//! that fold in expected rework ([`adjust`]), balanced with the
//! Moodie–Young heuristic ([`moodie_young`]) or an exact SALBP-1 branch and
//! bound ([`exact`]), and scored by a seeded lot simulation ([`simulate`])
//! whose efficiency is the minimum of time and yield efficiency.
//!
//! ```
//! use stochalb::{adjust_instance, bundled, moodie_young, PercentileConfig};
//!
//! let line = bundled::hoffman9();
//! let times = adjust_instance(&line, PercentileConfig::default()).unwrap();
//! let balance = moodie_young::balance(&line, &times, 2.0).unwrap();
//! assert_eq!(balance.station_count(), 4);
//! ```

pub mod adjust;
pub mod bundled;
pub mod error;
pub mod exact;
pub mod format;
pub mod model;
pub mod moodie_young;
pub mod precedence;
pub mod simulate;
pub mod stats;
pub mod sweep;

pub use adjust::{adjust_instance, AdjustedTimes, TaskAdjustment};
pub use error::{Error, Result, ValidationIssue};
pub use exact::{ExactSolution, SolverLimits};
pub use format::{load_instance, parse_instance, serialize_instance};
pub use model::{capacity_lower_bound, Instance, LineBalance, PercentileConfig, TaskId, TaskSpec};
pub use precedence::{build_matrix, PrecedenceMatrix};
pub use simulate::{simulate, SimulationConfig, SimulationReport};
pub use stats::{NormalParams, RngSeed};

/// Balancing method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    MoodieYoung,
    /// Exact minimum-station branch and bound.
    Exact,
}

impl Method {
    /// Balance and report whether the result is proven optimal. The
    /// heuristic never claims optimality.
    pub fn balance(
        self,
        instance: &Instance,
        times: &AdjustedTimes,
        cycle_time_per_unit: f64,
        limits: &SolverLimits,
    ) -> Result<(LineBalance, bool)> {
        match self {
            Method::MoodieYoung => Ok((moodie_young::balance(instance, times, cycle_time_per_unit)?, false)),
            Method::Exact => {
                let s = exact::solve(instance, times, cycle_time_per_unit, limits)?;
                Ok((s.balance, s.optimal))
            }
        }
    }
}
