//! `stochalb` command-line interface.
//!
//! Exit codes: 0 success, 2 input error, 3 infeasible cycle, 4 I/O error.

mod report;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stochalb::{bundled, load_instance, Instance, Method, PercentileConfig, RngSeed, SimulationConfig, SolverLimits};

#[derive(Parser)]
#[command(name = "stochalb", version, about = "Assembly line balancing with stochastic task times and rework")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print adjusted processing times per task.
    Adjust {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        percentiles: PercentileArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Balance the line and list the stations.
    Balance {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        line: LineArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Balance the line, then simulate lots through it.
    Simulate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        line: LineArgs,
        #[command(flatten)]
        sim: SimArgs,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Adjust, balance and simulate over a (p1, p2) grid and write CSV.
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::MoodieYoung)]
        method: MethodArg,
        #[command(flatten)]
        cycle: CycleArgs,
        #[command(flatten)]
        limits: LimitArgs,
        #[command(flatten)]
        sim: SimArgs,
        /// Grid spacing; points are 0.05 + k * step up to 0.95.
        #[arg(long, default_value_t = stochalb::sweep::DEFAULT_STEP)]
        grid_step: f64,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the precedence matrix.
    Matrix {
        #[command(flatten)]
        input: InputArgs,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Instance file, or the name of a bundled instance (hoffman9, hoffman9-paper-adjusted, shirt15).
    instance: String,
}

#[derive(Args)]
struct PercentileArgs {
    /// Percentile applied to task times.
    #[arg(long, default_value_t = 0.5)]
    p1: f64,
    /// Percentile applied to the defect count.
    #[arg(long, default_value_t = 0.5)]
    p2: f64,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct CycleArgs {
    /// Cycle time per unit.
    #[arg(long)]
    cycle_per_unit: Option<f64>,
    /// Cycle time per lot; divided by the lot size.
    #[arg(long)]
    cycle_per_lot: Option<f64>,
}

#[derive(Args)]
struct LimitArgs {
    /// Node budget for the exact solver.
    #[arg(long, default_value_t = SolverLimits::default().node_budget)]
    node_budget: u64,
}

#[derive(Args)]
struct LineArgs {
    #[arg(long, value_enum, default_value_t = MethodArg::MoodieYoung)]
    method: MethodArg,
    #[command(flatten)]
    cycle: CycleArgs,
    #[command(flatten)]
    percentiles: PercentileArgs,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long, default_value_t = 100)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    MoodieYoung,
    /// Exact minimum-station branch and bound.
    #[value(alias = "exact")]
    Ilp,
}

impl MethodArg {
    fn method(self) -> Method {
        match self {
            MethodArg::MoodieYoung => Method::MoodieYoung,
            MethodArg::Ilp => Method::Exact,
        }
    }
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Table,
    Csv,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn io(message: impl Into<String>) -> Self {
        Self { code: 4, message: message.into() }
    }
}

impl From<stochalb::Error> for Failure {
    fn from(e: stochalb::Error) -> Self {
        let code = match e {
            stochalb::Error::Infeasible { .. } => 3,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn load(arg: &str) -> CliResult<Instance> {
    let path = Path::new(arg);
    let text = if path.exists() {
        fs::read_to_string(path).map_err(|e| Failure::io(format!("cannot read {arg}: {e}")))?
    } else if let Some(text) = bundled::source(arg) {
        text.to_string()
    } else {
        return Err(Failure::input(format!(
            "{arg}: no such file or bundled instance (bundled: {})",
            bundled::ALL.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", ")
        )));
    };
    load_instance(&text).map_err(|e| Failure::input(format!("{arg}: {e}")))
}

fn percentiles(args: &PercentileArgs) -> CliResult<PercentileConfig> {
    Ok(PercentileConfig::new(args.p1, args.p2)?)
}

fn cycle_per_unit(args: &CycleArgs, instance: &Instance) -> CliResult<f64> {
    let cycle = match (args.cycle_per_unit, args.cycle_per_lot) {
        (Some(c), _) => c,
        (None, Some(lot)) => {
            if instance.lot_size == 0 {
                return Err(Failure::input("--cycle-per-lot needs a positive lot size"));
            }
            lot / instance.lot_size as f64
        }
        (None, None) => unreachable!("clap requires a cycle option"),
    };
    if !(cycle > 0.0 && cycle.is_finite()) {
        return Err(Failure::input(format!("cycle time must be positive, got {cycle}")));
    }
    Ok(cycle)
}

fn limits(args: &LimitArgs) -> SolverLimits {
    SolverLimits {
        node_budget: args.node_budget,
        ..SolverLimits::default()
    }
}

fn sim_config(args: &SimArgs) -> SimulationConfig {
    SimulationConfig {
        runs: args.runs,
        seed: RngSeed(args.seed),
        lot_size: None,
    }
}

fn emit(text: &str) -> CliResult {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| Failure::io(format!("cannot write output: {e}")))
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Adjust { input, percentiles: p, format } => {
            let instance = load(&input.instance)?;
            let times = stochalb::adjust_instance(&instance, percentiles(&p)?)?;
            let text = match format {
                Format::Table => report::adjust_table(&instance, &times),
                Format::Csv => report::adjust_csv(&instance, &times)?,
            };
            emit(&text)
        }
        Command::Balance { input, line, format } => {
            let instance = load(&input.instance)?;
            let cycle = cycle_per_unit(&line.cycle, &instance)?;
            let times = stochalb::adjust_instance(&instance, percentiles(&line.percentiles)?)?;
            let method = line.method.method();
            let (balance, optimal) = method.balance(&instance, &times, cycle, &limits(&line.limits))?;
            let text = match format {
                Format::Table => report::balance_table(&instance, &times, &balance, method, optimal),
                Format::Csv => report::balance_csv(&balance)?,
            };
            emit(&text)
        }
        Command::Simulate { input, line, sim, format } => {
            let instance = load(&input.instance)?;
            let cycle = cycle_per_unit(&line.cycle, &instance)?;
            let times = stochalb::adjust_instance(&instance, percentiles(&line.percentiles)?)?;
            let method = line.method.method();
            let (balance, _) = method.balance(&instance, &times, cycle, &limits(&line.limits))?;
            let result = stochalb::simulate(&balance, &instance, &sim_config(&sim));
            let text = match format {
                Format::Table => report::simulate_table(&instance, &balance, &result),
                Format::Csv => report::simulate_csv(&result)?,
            };
            emit(&text)
        }
        Command::Sweep { input, method, cycle, limits: lim, sim, grid_step, out } => {
            let instance = load(&input.instance)?;
            let cycle = cycle_per_unit(&cycle, &instance)?;
            let grid = stochalb::sweep::grid(grid_step)?;
            let config = sim_config(&sim);
            let rows = stochalb::sweep::sweep(&instance, cycle, method.method(), &grid, &config, &limits(&lim))?;
            let csv = report::sweep_csv(&rows)?;
            let peak = report::sweep_peak(&rows, config.runs);
            match out {
                Some(path) => {
                    fs::write(&path, csv).map_err(|e| Failure::io(format!("cannot write {}: {e}", path.display())))?;
                    emit(&format!("wrote {} rows to {}\n{peak}", rows.len(), path.display()))
                }
                None => {
                    eprint!("{peak}");
                    emit(&csv)
                }
            }
        }
        Command::Matrix { input } => {
            let instance = load(&input.instance)?;
            emit(&stochalb::build_matrix(&instance).to_string())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
