//! Human tables and CSV rendering for each subcommand.

use std::fmt::Write as _;

use stochalb::simulate::SimulationReport;
use stochalb::sweep::{peak_rows, SweepRow};
use stochalb::{capacity_lower_bound, AdjustedTimes, Instance, LineBalance, Method};

use crate::{CliResult, Failure};

/// Printed and reference values further apart than this get a footnote flag.
const REFERENCE_TOL: f64 = 0.005;

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io = |e: csv::Error| Failure::io(format!("cannot write CSV: {e}"));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::io(format!("cannot write CSV: {e}")))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

fn describe(instance: &Instance) -> String {
    let mut s = format!("{} (lot size {})", instance.name, instance.lot_size);
    if let Some(p) = &instance.provenance {
        let _ = write!(s, " [{p}]");
    }
    s
}

fn method_name(method: Method) -> &'static str {
    match method {
        Method::MoodieYoung => "moodie-young",
        Method::Exact => "ilp",
    }
}

fn arrows(tasks: &[usize]) -> String {
    tasks.iter().map(|t| t.to_string()).collect::<Vec<_>>().join("→")
}

pub fn adjust_table(instance: &Instance, times: &AdjustedTimes) -> String {
    let reference = instance.reference_adjusted.as_deref();
    let mut out = format!(
        "{}  p1={} p2={}\n{:>4}  {:>6}  {:>3}  {:>6}  {:>8}",
        describe(instance),
        times.config.p1,
        times.config.p2,
        "task",
        "base",
        "K",
        "rework",
        "adjusted"
    );
    if reference.is_some() {
        let _ = write!(out, "  {:>9}", "reference");
    }
    out.push('\n');
    let mut flagged = false;
    for (i, t) in times.tasks.iter().enumerate() {
        let _ = write!(out, "{:>4}  {:>6.2}  {:>3}  {:>6.2}  ", t.id, t.base, t.defects, t.rework);
        match reference.map(|r| r[i]) {
            Some(r) => {
                let off = (t.adjusted - r).abs() > REFERENCE_TOL;
                flagged |= off;
                let adjusted = format!("{:.2}{}", t.adjusted, if off { "*" } else { " " });
                let _ = writeln!(out, "{adjusted:>9} {r:>9.2}");
            }
            None => {
                let _ = writeln!(out, "{:>8.2}", t.adjusted);
            }
        }
    }
    let _ = writeln!(out, "total adjusted time {:.2}, largest {:.2}", times.total(), times.max());
    if flagged {
        let _ = writeln!(out, "* differs from the reference value by more than {REFERENCE_TOL}");
    }
    out
}

pub fn adjust_csv(instance: &Instance, times: &AdjustedTimes) -> CliResult<String> {
    let reference = instance.reference_adjusted.as_deref();
    csv_string(
        &["task", "base", "defects", "rework", "adjusted", "reference"],
        times.tasks.iter().enumerate().map(|(i, t)| {
            vec![
                t.id.to_string(),
                t.base.to_string(),
                t.defects.to_string(),
                t.rework.to_string(),
                t.adjusted.to_string(),
                reference.map(|r| r[i].to_string()).unwrap_or_default(),
            ]
        }),
    )
}

pub fn balance_table(
    instance: &Instance,
    times: &AdjustedTimes,
    balance: &LineBalance,
    method: Method,
    optimal: bool,
) -> String {
    let cycle = balance.cycle_time_per_unit;
    let mut out = format!(
        "{}  method={}  p1={} p2={}\ncycle time {} per unit ({} per lot)\n",
        describe(instance),
        method_name(method),
        times.config.p1,
        times.config.p2,
        cycle,
        cycle * instance.lot_size as f64
    );
    let idle = balance.idle();
    for (j, tasks) in balance.stations.iter().enumerate() {
        let label = format!("WS{}: {}", j + 1, arrows(tasks));
        let _ = writeln!(out, "{label:<28} load {:.2}  idle {:.2}", balance.loads[j], idle[j]);
    }
    let bound = capacity_lower_bound(&times.times(), cycle);
    let status = match method {
        Method::MoodieYoung => "heuristic",
        Method::Exact if optimal => "optimal",
        Method::Exact => "best found (search budget exhausted)",
    };
    let _ = writeln!(
        out,
        "stations {}  lower bound {}  total idle {:.2}  {status}",
        balance.station_count(),
        bound,
        idle.iter().sum::<f64>()
    );
    out
}

pub fn balance_csv(balance: &LineBalance) -> CliResult<String> {
    let idle = balance.idle();
    csv_string(
        &["station", "tasks", "load", "idle"],
        balance.stations.iter().enumerate().map(|(j, tasks)| {
            vec![
                (j + 1).to_string(),
                tasks.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" "),
                balance.loads[j].to_string(),
                idle[j].to_string(),
            ]
        }),
    )
}

pub fn simulate_table(instance: &Instance, balance: &LineBalance, report: &SimulationReport) -> String {
    let runs = report.runs.len();
    let mut out = format!(
        "{}  {} runs  seed {}  lot size {}  cycle time {} per unit\n",
        describe(instance),
        runs,
        report.seed.0,
        report.lot_size,
        report.cycle_time_per_unit
    );
    let _ = writeln!(out, "{:<18} {:>8} {:>8} {:>8}", "", "mean", "sd", "se");
    for (label, s) in [
        ("time efficiency", report.time_efficiency),
        ("yield efficiency", report.yield_efficiency),
        ("efficiency", report.efficiency),
    ] {
        let _ = writeln!(out, "{label:<18} {:>8.4} {:>8.4} {:>8.4}", s.mean, s.sd, s.std_error(runs));
    }
    let _ = writeln!(out, "mean idle per station over a lot:");
    for (j, tasks) in balance.stations.iter().enumerate() {
        let label = format!("WS{}: {}", j + 1, arrows(tasks));
        let _ = writeln!(out, "  {label:<28} {:>10.2}", report.mean_idle[j]);
    }
    out
}

pub fn simulate_csv(report: &SimulationReport) -> CliResult<String> {
    let stations = report.mean_idle.len();
    let mut header = vec!["run".to_string(), "time_eff".into(), "yield_eff".into(), "efficiency".into(), "output".into()];
    header.extend((1..=stations).map(|j| format!("idle_ws{j}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    csv_string(
        &header,
        report.runs.iter().enumerate().map(|(r, run)| {
            let mut row = vec![
                r.to_string(),
                run.time_efficiency.to_string(),
                run.yield_efficiency.to_string(),
                run.efficiency.to_string(),
                run.output.to_string(),
            ];
            row.extend(run.idle.iter().map(|x| x.to_string()));
            row
        }),
    )
}

pub fn sweep_csv(rows: &[SweepRow]) -> CliResult<String> {
    csv_string(
        &["p1", "p2", "stations", "time_eff", "yield_eff", "eff_mean", "eff_std", "feasible"],
        rows.iter().map(|row| {
            let mut cells = vec![row.p1.to_string(), row.p2.to_string()];
            match row.point {
                Some(p) => cells.extend([
                    p.stations.to_string(),
                    p.time_eff.to_string(),
                    p.yield_eff.to_string(),
                    p.eff_mean.to_string(),
                    p.eff_std.to_string(),
                    "true".into(),
                ]),
                None => {
                    cells.extend(std::iter::repeat_n(String::new(), 5));
                    cells.push("false".into());
                }
            }
            cells
        }),
    )
}

pub fn sweep_peak(rows: &[SweepRow], runs: usize) -> String {
    let peak = peak_rows(rows, runs);
    if peak.is_empty() {
        return "no feasible grid point\n".into();
    }
    let mut out = format!("{} grid points within one standard error of the best mean efficiency:\n", peak.len());
    let mut peak = peak;
    peak.sort_by(|a, b| {
        let (pa, pb) = (a.point.unwrap(), b.point.unwrap());
        pb.eff_mean.total_cmp(&pa.eff_mean)
    });
    for row in peak {
        let p = row.point.expect("peak rows are feasible");
        let _ = writeln!(
            out,
            "  p1={:<5} p2={:<5} stations {:>2}  efficiency {:.4} (sd {:.4})",
            row.p1, row.p2, p.stations, p.eff_mean, p.eff_std
        );
    }
    out
}
