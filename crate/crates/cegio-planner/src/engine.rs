//! The counterexample-guided optimization driver.
//!
//! The loop asks the oracle for a path strictly cheaper than the incumbent
//! minus the improvement step δ. Every SAT answer becomes the new incumbent;
//! UNSAT escalates the waypoint count, and once UNSAT repeats up to the
//! configured limit (or the waypoint budget is reached), the grid is refined
//! by one decimal place and the search continues around the rescaled
//! incumbent. When the precision target η has been processed and the last
//! inner loop ended in UNSAT, the incumbent is within δ of the grid optimum
//! for the final (waypoint count, precision, domain) and is returned as
//! optimal at that precision.
//!
//! With the builtin backend the whole run is deterministic: identical
//! configurations produce identical traces and identical answers.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use crate::cost::Cost;
use crate::encoder::{encode, DomainBox, EncodeError};
use crate::geometry::{distance, Point};
use crate::oracle::{check, BackendSpec, Verdict};
use crate::scenario::{grid_path_to_real, GridPath, Scenario};
use crate::trace::{ConvergenceTrace, TraceRecord, TraceVerdict};

/// Domain contraction after each refinement: ±2 coarse cells, i.e. ±20 fine
/// grid units around every coordinate of the rescaled incumbent.
const CONTRACTION_RADIUS: u64 = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitialBound {
    /// 2·(width+height) of the environment: deterministic and certainly
    /// loose enough to admit some path if one exists at all.
    Perimeter,
    Explicit(BigRational),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineConfig {
    /// Precision target: grids 10⁰ … 10^eta cells per meter are processed.
    pub eta: u32,
    /// Minimum cost improvement δ per accepted counterexample, in meters.
    pub step: BigRational,
    pub initial_waypoints: usize,
    pub max_waypoints: usize,
    /// Consecutive UNSAT verdicts (across waypoint escalations) that trigger
    /// precision refinement.
    pub consecutive_unsat_limit: u32,
    /// Per-query oracle budget.
    pub oracle_timeout: Option<Duration>,
    /// Total wall-clock budget for the whole run.
    pub total_budget: Option<Duration>,
    /// Cap on the number of oracle calls.
    pub max_oracle_calls: Option<u64>,
    pub initial_bound: InitialBound,
    /// Disables domain contraction after refinement. Contraction assumes the
    /// optimum stays near the incumbent, which obstacles can defeat; the
    /// full domain restores completeness at the cost of a larger search.
    pub full_domain: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            eta: 1,
            step: BigRational::new(BigInt::from(1), BigInt::from(100)),
            initial_waypoints: 1,
            max_waypoints: 3,
            consecutive_unsat_limit: 2,
            oracle_timeout: None,
            total_budget: None,
            max_oracle_calls: None,
            initial_bound: InitialBound::Perimeter,
            full_domain: false,
        }
    }
}

/// Largest supported precision exponent: 10^eta must fit the u64 grid
/// scale (and anything beyond a micrometer grid is not a realistic ask).
pub const MAX_ETA: u32 = 18;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("step must be positive")]
    NonPositiveStep,
    #[error("initial waypoint count must be at least 1")]
    NoInitialWaypoints,
    #[error("max waypoints {max} below initial {initial}")]
    MaxBelowInitial { max: usize, initial: usize },
    #[error("consecutive UNSAT limit must be at least 1")]
    ZeroUnsatLimit,
    #[error("explicit initial bound must exceed the straight-line distance start–target")]
    BoundBelowStraightLine,
    #[error("precision target {0} exceeds the supported maximum {MAX_ETA}")]
    EtaTooLarge(u32),
}

impl EngineConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !self.step.is_positive() {
            return Err(ConfigError::NonPositiveStep);
        }
        if self.eta > MAX_ETA {
            return Err(ConfigError::EtaTooLarge(self.eta));
        }
        if self.initial_waypoints == 0 {
            return Err(ConfigError::NoInitialWaypoints);
        }
        if self.max_waypoints < self.initial_waypoints {
            return Err(ConfigError::MaxBelowInitial {
                max: self.max_waypoints,
                initial: self.initial_waypoints,
            });
        }
        if self.consecutive_unsat_limit == 0 {
            return Err(ConfigError::ZeroUnsatLimit);
        }
        Ok(())
    }
}

/// The initial cost bound J₀ in meters.
pub fn initial_bound(scenario: &Scenario, config: &EngineConfig) -> Result<BigRational, ConfigError> {
    match &config.initial_bound {
        InitialBound::Perimeter => {
            let two = BigRational::from_integer(BigInt::from(2));
            Ok(two * (scenario.bounds.width() + scenario.bounds.height()))
        }
        InitialBound::Explicit(value) => {
            let straight = distance(&scenario.start, &scenario.target);
            if Cost::from_rational(value.clone()) <= straight {
                return Err(ConfigError::BoundBelowStraightLine);
            }
            Ok(value.clone())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    /// Search exhausted at the target precision; the answer is within δ of
    /// the grid optimum for the final waypoint count and domain.
    OptimalAtPrecision,
    /// Time / call budget ran out (or a query timed out); best-so-far.
    BudgetExhausted,
    /// No feasible path up to the waypoint budget on the coarsest grid.
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct OptimizeResult {
    pub status: RunStatus,
    /// Real coordinates [S, …, T] of the best path found, if any.
    pub path: Option<Vec<Point>>,
    pub cost: Option<Cost>,
    pub grid_path: Option<GridPath>,
    pub trace: ConvergenceTrace,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error("oracle backend error: {detail}")]
    Backend { detail: String },
}

pub fn optimize(
    scenario: &Scenario,
    config: &EngineConfig,
    backend: &BackendSpec,
) -> Result<OptimizeResult, EngineError> {
    optimize_with_progress(scenario, config, backend, |_| {})
}

/// Like [`optimize`], invoking the callback on the engine thread for every
/// trace record as it is produced.
pub fn optimize_with_progress(
    scenario: &Scenario,
    config: &EngineConfig,
    backend: &BackendSpec,
    mut on_record: impl FnMut(&TraceRecord),
) -> Result<OptimizeResult, EngineError> {
    config.validate()?;
    let run_start = Instant::now();
    let mut backend = backend.clone();
    if config.oracle_timeout.is_some() {
        backend = backend.with_timeout(config.oracle_timeout);
    }

    let mut trace = ConvergenceTrace::new();
    let mut incumbent_cost = Cost::from_rational(initial_bound(scenario, config)?);
    let mut incumbent: Option<GridPath> = None;
    let mut waypoints = config.initial_waypoints;
    let mut stage = 0u32; // decimal places processed so far (k)
    let mut precision = 1u64;
    let mut consecutive_unsat = 0u32;
    let mut calls = 0u64;
    let step = Cost::from_rational(config.step.clone());

    let finish = |status: RunStatus,
                  incumbent: Option<GridPath>,
                  incumbent_cost: Cost,
                  trace: ConvergenceTrace| {
        let path = incumbent
            .as_ref()
            .map(|grid| grid_path_to_real(grid, scenario));
        let cost = incumbent.as_ref().map(|_| incumbent_cost);
        Ok(OptimizeResult {
            status,
            path,
            cost,
            grid_path: incumbent,
            trace,
        })
    };

    loop {
        // One precision stage: counterexample descent with waypoint
        // escalation on UNSAT.
        loop {
            if let Some(budget) = config.total_budget {
                if run_start.elapsed() >= budget {
                    return finish(RunStatus::BudgetExhausted, incumbent, incumbent_cost, trace);
                }
            }
            if let Some(cap) = config.max_oracle_calls {
                if calls >= cap {
                    return finish(RunStatus::BudgetExhausted, incumbent, incumbent_cost, trace);
                }
            }

            let bound = &incumbent_cost - &step;
            let verdict = if bound.sign() != std::cmp::Ordering::Greater {
                // Nothing can cost less than a non-positive bound; skip the
                // oracle (the encoder would reject the query).
                None
            } else {
                let domain = if stage == 0 || config.full_domain {
                    DomainBox::full(scenario, precision, waypoints)
                } else {
                    let centers = contraction_centers(
                        incumbent.as_ref().expect("refinement requires an incumbent"),
                        waypoints,
                        scenario,
                    );
                    DomainBox::contracted(&centers, CONTRACTION_RADIUS, scenario, precision)
                };
                let query = encode(scenario, precision, waypoints, &domain, &bound)?;
                let started = Instant::now();
                let verdict = check(&query, &backend);
                let elapsed = started.elapsed();
                calls += 1;
                if let Verdict::BackendError { detail } = verdict {
                    return Err(EngineError::Backend { detail });
                }
                let record = TraceRecord {
                    iteration: calls,
                    precision,
                    waypoints,
                    bound: bound.clone(),
                    verdict: match &verdict {
                        Verdict::Sat { .. } => TraceVerdict::Sat,
                        Verdict::Unsat => TraceVerdict::Unsat,
                        Verdict::Timeout => TraceVerdict::Timeout,
                        Verdict::BackendError { .. } => unreachable!(),
                    },
                    elapsed,
                    path: match &verdict {
                        Verdict::Sat { model, .. } => Some(grid_path_to_real(model, scenario)),
                        _ => None,
                    },
                };
                on_record(&record);
                trace.push(record);
                Some(verdict)
            };

            match verdict {
                Some(Verdict::Sat { model, cost }) => {
                    incumbent = Some(model);
                    incumbent_cost = cost;
                    consecutive_unsat = 0;
                }
                Some(Verdict::Unsat) | None => {
                    if incumbent.is_none() {
                        // Pure feasibility probing: no path seen yet, so
                        // escalate all the way before giving up.
                        if waypoints < config.max_waypoints {
                            waypoints += 1;
                            continue;
                        }
                        return finish(RunStatus::Infeasible, incumbent, incumbent_cost, trace);
                    }
                    consecutive_unsat += 1;
                    if consecutive_unsat >= config.consecutive_unsat_limit
                        || waypoints >= config.max_waypoints
                    {
                        break;
                    }
                    waypoints += 1;
                }
                Some(Verdict::Timeout) => {
                    return finish(RunStatus::BudgetExhausted, incumbent, incumbent_cost, trace);
                }
                Some(Verdict::BackendError { .. }) => unreachable!("handled above"),
            }
        }

        if stage >= config.eta {
            return finish(
                RunStatus::OptimalAtPrecision,
                incumbent,
                incumbent_cost,
                trace,
            );
        }
        stage += 1;
        precision *= 10;
        incumbent = incumbent.map(|grid| grid.rescaled_tenfold());
        consecutive_unsat = 0;
    }
}

/// Box centers for the contracted domain: the incumbent's waypoints, grown
/// to the current waypoint count by inserting the (grid-snapped) midpoint of
/// the longest segment. The inserted points only seed box placement; the
/// incumbent path itself is never modified.
fn contraction_centers(
    incumbent: &GridPath,
    waypoints: usize,
    scenario: &Scenario,
) -> Vec<(BigInt, BigInt)> {
    let mut centers = incumbent.waypoints.clone();
    let p = BigRational::from_integer(BigInt::from(incumbent.precision));
    let scaled_start = (&scenario.start.x * &p, &scenario.start.y * &p);
    let scaled_target = (&scenario.target.x * &p, &scenario.target.y * &p);

    while centers.len() < waypoints {
        let as_rational = |c: &(BigInt, BigInt)| {
            (
                BigRational::from_integer(c.0.clone()),
                BigRational::from_integer(c.1.clone()),
            )
        };
        let mut vertices = Vec::with_capacity(centers.len() + 2);
        vertices.push(scaled_start.clone());
        vertices.extend(centers.iter().map(as_rational));
        vertices.push(scaled_target.clone());

        let mut longest_at = 0;
        let mut longest = Cost::zero();
        for (i, pair) in vertices.windows(2).enumerate() {
            let length = distance(
                &Point::new(pair[0].0.clone(), pair[0].1.clone()),
                &Point::new(pair[1].0.clone(), pair[1].1.clone()),
            );
            if length > longest {
                longest = length;
                longest_at = i;
            }
        }
        let (ax, ay) = &vertices[longest_at];
        let (bx, by) = &vertices[longest_at + 1];
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let mid_x = (ax + bx) * &half;
        let mid_y = (ay + by) * &half;
        centers.insert(longest_at, (round_half_up(&mid_x), round_half_up(&mid_y)));
    }
    centers
}

fn round_half_up(value: &BigRational) -> BigInt {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    (value + half).floor().to_integer()
}
