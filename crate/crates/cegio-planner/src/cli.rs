//! Command-line front end: scenario loading, engine invocation, trace CSV
//! and SVG emission, and a run summary.
//!
//! Exit codes: 0 on success (optimal, or budget exhausted with a feasible
//! path), 2 for flag and configuration errors, 3 for scenario problems,
//! 4 for backend failures or unwritable outputs, 5 for infeasible
//! scenarios, 6 when the budget ran out before any feasible path was found.
//!
//! Emitted files are byte-reproducible by default: per-query timings in the
//! CSV are zeroed unless `--timing` is passed (the summary always reports
//! real wall time).

use std::fmt;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Parser, ValueEnum};
use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::decimal;
use crate::engine::{
    optimize_with_progress, EngineConfig, EngineError, InitialBound, OptimizeResult, RunStatus,
};
use crate::geometry::Point;
use crate::oracle::BackendSpec;
use crate::scenario::{self, Scenario, ScenarioError};
use crate::svg::{emit_svg, SvgOptions};
use crate::trace::{emit_trace_csv, TraceVerdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendChoice {
    Builtin,
    Smtlib,
}

#[derive(Debug, Parser)]
#[command(
    name = "cegio-planner",
    about = "Certified 2-D path planning by counterexample-guided inductive optimization",
    version
)]
pub struct CliArgs {
    /// Built-in scenario name (setting1, setting2) or a scenario file path.
    #[arg(long)]
    pub scenario: String,

    /// Oracle backend.
    #[arg(long, value_enum, default_value = "builtin")]
    pub backend: BackendChoice,

    /// External solver command line (reads SMT-LIB 2 on stdin).
    #[arg(long, env = "CEGIO_SOLVER_CMD")]
    pub solver_cmd: Option<String>,

    /// Minimum cost improvement per iteration, in meters (e.g. 1e-2).
    #[arg(long, default_value = "1e-2", allow_hyphen_values = true)]
    pub step: String,

    /// Precision target η: grids of 10⁰ … 10^η cells per meter.
    #[arg(long, default_value_t = 1)]
    pub precision: u32,

    /// Waypoint budget.
    #[arg(long, default_value_t = 3)]
    pub max_points: usize,

    /// Consecutive UNSAT verdicts before precision refinement.
    #[arg(long, default_value_t = 2)]
    pub unsat_limit: u32,

    /// Per-query oracle timeout in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,

    /// Total wall-clock budget in seconds.
    #[arg(long)]
    pub budget: Option<f64>,

    /// Initial cost bound: "perimeter" or an explicit value in meters.
    #[arg(long, default_value = "perimeter", allow_hyphen_values = true)]
    pub bound: String,

    /// Search the full domain after refinement instead of contracting
    /// around the incumbent.
    #[arg(long)]
    pub full_domain: bool,

    /// Write the convergence trace as CSV.
    #[arg(long)]
    pub trace_csv: Option<PathBuf>,

    /// Write an SVG rendering of the environment and final path.
    #[arg(long)]
    pub svg_out: Option<PathBuf>,

    /// Record real per-query times in the trace CSV (makes output bytes
    /// run-dependent).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid flag: {0}")]
    Flag(String),
    #[error("cannot read scenario `{path}`: {detail}")]
    ScenarioIo { path: String, detail: String },
    #[error("invalid scenario: {0}")]
    Scenario(#[from] ScenarioError),
    #[error("{0}")]
    Engine(EngineError),
    #[error("cannot write `{path}`: {detail}")]
    Output { path: String, detail: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Flag(_) => 2,
            CliError::ScenarioIo { .. } | CliError::Scenario(_) => 3,
            CliError::Engine(EngineError::Backend { .. }) => 4,
            CliError::Engine(_) => 2,
            CliError::Output { .. } => 4,
        }
    }
}

/// Summary of one run.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub status: RunStatus,
    pub cost: Option<f64>,
    pub path: Option<Vec<Point>>,
    pub oracle_calls: u64,
    pub sat_count: usize,
    pub unsat_count: usize,
    pub timeout_count: usize,
    pub wall_time: Duration,
    pub backend: String,
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match self.status {
            RunStatus::OptimalAtPrecision => "optimal at target precision",
            RunStatus::BudgetExhausted => "budget exhausted (best effort)",
            RunStatus::Infeasible => "infeasible",
        };
        writeln!(f, "status:       {status}")?;
        match self.cost {
            Some(cost) => writeln!(f, "cost:         {cost:.6} m")?,
            None => writeln!(f, "cost:         none")?,
        }
        if let Some(path) = &self.path {
            let rendered: Vec<String> = path.iter().map(format_point).collect();
            writeln!(f, "path:         {}", rendered.join(" -> "))?;
        }
        writeln!(
            f,
            "oracle calls: {} (sat {}, unsat {}, timeout {})",
            self.oracle_calls, self.sat_count, self.unsat_count, self.timeout_count
        )?;
        writeln!(f, "wall time:    {:.3} s", self.wall_time.as_secs_f64())?;
        write!(f, "backend:      {}", self.backend)
    }
}

fn format_point(p: &Point) -> String {
    let coord = |v: &num_rational::BigRational| {
        decimal::format_exact(v)
            .unwrap_or_else(|| format!("{:.4}", v.to_f64().unwrap_or(f64::NAN)))
    };
    format!("({}, {})", coord(&p.x), coord(&p.y))
}

fn load(scenario_arg: &str) -> Result<Scenario, CliError> {
    if let Some(builtin) = scenario::by_name(scenario_arg) {
        return Ok(builtin);
    }
    let text = std::fs::read_to_string(scenario_arg).map_err(|e| CliError::ScenarioIo {
        path: scenario_arg.to_string(),
        detail: e.to_string(),
    })?;
    Ok(scenario::load_scenario(&text)?)
}

fn engine_config(args: &CliArgs) -> Result<EngineConfig, CliError> {
    let step = decimal::parse_decimal(&args.step)
        .map_err(|e| CliError::Flag(format!("--step: {e}")))?;
    if !step.is_positive() {
        return Err(CliError::Flag("--step must be positive".into()));
    }
    let initial_bound = match args.bound.as_str() {
        "perimeter" => InitialBound::Perimeter,
        value => {
            let bound = decimal::parse_decimal(value)
                .map_err(|e| CliError::Flag(format!("--bound: {e}")))?;
            if !bound.is_positive() {
                return Err(CliError::Flag("--bound must be positive".into()));
            }
            InitialBound::Explicit(bound)
        }
    };
    let seconds = |name: &str, value: Option<f64>| -> Result<Option<Duration>, CliError> {
        match value {
            None => Ok(None),
            Some(s) if s > 0.0 && s.is_finite() => Ok(Some(Duration::from_secs_f64(s))),
            Some(_) => Err(CliError::Flag(format!("{name} must be positive"))),
        }
    };
    Ok(EngineConfig {
        eta: args.precision,
        step,
        initial_waypoints: 1,
        max_waypoints: args.max_points,
        consecutive_unsat_limit: args.unsat_limit,
        oracle_timeout: seconds("--timeout", args.timeout)?,
        total_budget: seconds("--budget", args.budget)?,
        max_oracle_calls: None,
        initial_bound,
        full_domain: args.full_domain,
    })
}

fn backend_spec(args: &CliArgs) -> Result<BackendSpec, CliError> {
    match args.backend {
        BackendChoice::Builtin => Ok(BackendSpec::builtin()),
        BackendChoice::Smtlib => {
            let command = args.solver_cmd.clone().ok_or_else(|| {
                CliError::Flag(
                    "--backend smtlib requires --solver-cmd (or CEGIO_SOLVER_CMD)".into(),
                )
            })?;
            Ok(BackendSpec::external(command))
        }
    }
}

/// Executes one run end to end and writes the requested artifacts.
pub fn run(args: &CliArgs) -> Result<RunReport, CliError> {
    let scenario = load(&args.scenario)?;
    let config = engine_config(args)?;
    let backend = backend_spec(args)?;
    let started = Instant::now();

    let result: OptimizeResult =
        optimize_with_progress(&scenario, &config, &backend, |record| {
            eprintln!(
                "call {:>4}: p={} m={} J_c={:.6} {} ({:.3}s)",
                record.iteration,
                record.precision,
                record.waypoints,
                record.bound.to_f64(),
                record.verdict.as_str(),
                record.elapsed.as_secs_f64()
            );
        })
        .map_err(CliError::Engine)?;
    let wall_time = started.elapsed();

    if let Some(path) = &args.trace_csv {
        let trace = if args.timing {
            result.trace.clone()
        } else {
            result.trace.without_timing()
        };
        write_file(path, &emit_trace_csv(&trace))?;
    }
    if let Some(path) = &args.svg_out {
        match &result.path {
            Some(points) => {
                let svg = emit_svg(&scenario, points, &SvgOptions::default())
                    .expect("final path is feasible by engine invariant");
                write_file(path, &svg)?;
            }
            None => eprintln!("no feasible path; skipping {}", path.display()),
        }
    }

    Ok(RunReport {
        status: result.status,
        cost: result.cost.as_ref().map(|c| c.to_f64()),
        path: result.path,
        oracle_calls: result.trace.len() as u64,
        sat_count: result.trace.count(TraceVerdict::Sat),
        unsat_count: result.trace.count(TraceVerdict::Unsat),
        timeout_count: result.trace.count(TraceVerdict::Timeout),
        wall_time,
        backend: backend.label(),
    })
}

fn write_file(path: &PathBuf, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content).map_err(|e| CliError::Output {
        path: path.display().to_string(),
        detail: e.to_string(),
    })
}

/// Binary entry point; returns the process exit code.
pub fn main_entry() -> i32 {
    let args = CliArgs::parse();
    match run(&args) {
        Ok(report) => {
            println!("{report}");
            match report.status {
                RunStatus::OptimalAtPrecision => 0,
                RunStatus::BudgetExhausted => {
                    if report.path.is_some() {
                        0
                    } else {
                        6
                    }
                }
                RunStatus::Infeasible => 5,
            }
        }
        Err(error) => {
            eprintln!("error: {error}");
            error.exit_code()
        }
    }
}
