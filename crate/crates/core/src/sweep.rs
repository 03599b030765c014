//! Percentile grid sweep: adjust, balance and simulate at every `(p1, p2)`.

use rayon::prelude::*;

use crate::adjust::adjust_instance;
use crate::error::{Error, Result};
use crate::exact::SolverLimits;
use crate::model::{Instance, PercentileConfig};
use crate::simulate::{simulate, SimulationConfig};
use crate::stats::RngSeed;
use crate::Method;

pub const DEFAULT_STEP: f64 = 0.05;
const GRID_LO: f64 = 0.05;
const GRID_HI: f64 = 0.95;

/// Axis values `0.05 + k * step` up to 0.95 inclusive (with rounding slack).
pub fn axis(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Config(format!("grid step must be positive, got {step}")));
    }
    let count = ((GRID_HI - GRID_LO) / step + 1e-9).floor() as usize + 1;
    // Snap to 12 decimals so 0.05 + 18 * 0.05 reads back as 0.95.
    Ok((0..count)
        .map(|k| ((GRID_LO + k as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

/// Cartesian grid, `p1` outer and `p2` inner.
pub fn grid(step: f64) -> Result<Vec<(f64, f64)>> {
    let a = axis(step)?;
    Ok(a.iter().flat_map(|&p1| a.iter().map(move |&p2| (p1, p2))).collect())
}

/// Simulation seed used for grid point `index`.
pub fn point_seed(seed: RngSeed, index: usize) -> RngSeed {
    seed.derive(index as u64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub stations: usize,
    pub optimal: bool,
    pub time_eff: f64,
    pub yield_eff: f64,
    pub eff_mean: f64,
    pub eff_std: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub p1: f64,
    pub p2: f64,
    /// `None` when some adjusted time exceeds the cycle.
    pub point: Option<SweepPoint>,
}

pub fn sweep(
    instance: &Instance,
    cycle_time_per_unit: f64,
    method: Method,
    grid: &[(f64, f64)],
    sim: &SimulationConfig,
    limits: &SolverLimits,
) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        return Err(Error::Config("sweep grid is empty".into()));
    }
    grid.par_iter()
        .enumerate()
        .map(|(index, &(p1, p2))| {
            let config = PercentileConfig::new(p1, p2)?;
            let times = adjust_instance(instance, config)?;
            let (balance, optimal) = match method.balance(instance, &times, cycle_time_per_unit, limits) {
                Ok(b) => b,
                Err(Error::Infeasible { .. }) => return Ok(SweepRow { p1, p2, point: None }),
                Err(e) => return Err(e),
            };
            let cfg = SimulationConfig {
                seed: point_seed(sim.seed, index),
                ..sim.clone()
            };
            let report = simulate(&balance, instance, &cfg);
            Ok(SweepRow {
                p1,
                p2,
                point: Some(SweepPoint {
                    stations: balance.station_count(),
                    optimal,
                    time_eff: report.time_efficiency.mean,
                    yield_eff: report.yield_efficiency.mean,
                    eff_mean: report.efficiency.mean,
                    eff_std: report.efficiency.sd,
                }),
            })
        })
        .collect()
}

/// Rows whose mean efficiency is within one standard error of the best row.
pub fn peak_rows(rows: &[SweepRow], runs: usize) -> Vec<&SweepRow> {
    let best = rows
        .iter()
        .filter_map(|r| r.point)
        .max_by(|a, b| a.eff_mean.total_cmp(&b.eff_mean));
    let Some(best) = best else {
        return Vec::new();
    };
    let cutoff = best.eff_mean - best.eff_std / (runs.max(1) as f64).sqrt();
    rows.iter()
        .filter(|r| r.point.is_some_and(|p| p.eff_mean >= cutoff))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_axis_has_nineteen_values() {
        let a = axis(DEFAULT_STEP).unwrap();
        assert_eq!(a.len(), 19);
        assert_eq!(a[18], 0.95);
        assert_eq!(a[1], 0.1);
        assert_eq!(grid(DEFAULT_STEP).unwrap().len(), 361);
    }

    #[test]
    fn coarse_axis() {
        let a = axis(0.45).unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(grid(0.45).unwrap().len(), 9);
        assert_eq!(axis(1.0).unwrap(), vec![0.05]);
    }

    #[test]
    fn bad_step() {
        assert!(axis(0.0).is_err());
        assert!(axis(-0.1).is_err());
    }

    #[test]
    fn single_point_matches_direct_simulation() {
        let inst = crate::bundled::shirt15();
        let sim = SimulationConfig { runs: 30, seed: RngSeed(9), lot_size: None };
        let limits = SolverLimits::default();
        let rows = sweep(&inst, 2.0, Method::MoodieYoung, &[(0.5, 0.5)], &sim, &limits).unwrap();
        let times = adjust_instance(&inst, PercentileConfig::default()).unwrap();
        let (b, _) = Method::MoodieYoung.balance(&inst, &times, 2.0, &limits).unwrap();
        let direct = simulate(&b, &inst, &SimulationConfig { seed: point_seed(sim.seed, 0), ..sim });
        let p = rows[0].point.unwrap();
        assert_eq!(p.stations, b.station_count());
        assert_eq!(p.eff_mean, direct.efficiency.mean);
        assert_eq!(p.eff_std, direct.efficiency.sd);
    }

    #[test]
    fn infeasible_points_are_marked() {
        let inst = crate::bundled::hoffman9();
        let sim = SimulationConfig { runs: 5, ..SimulationConfig::default() };
        let rows = sweep(&inst, 0.9, Method::Exact, &[(0.05, 0.05), (0.95, 0.95)], &sim, &SolverLimits::default()).unwrap();
        assert!(rows[0].point.is_some());
        assert!(rows[1].point.is_none());
    }

    #[test]
    fn peak_rows_within_one_standard_error() {
        let row = |m: f64| SweepRow {
            p1: 0.5,
            p2: 0.5,
            point: Some(SweepPoint {
                stations: 3,
                optimal: true,
                time_eff: m,
                yield_eff: 1.0,
                eff_mean: m,
                eff_std: 0.1,
            }),
        };
        let rows = vec![row(0.80), row(0.79), row(0.70), SweepRow { p1: 0.9, p2: 0.9, point: None }];
        // Standard error at 4 runs: 0.05.
        let peak = peak_rows(&rows, 4);
        assert_eq!(peak.len(), 2);
    }
}
