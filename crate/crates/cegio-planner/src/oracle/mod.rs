//! The satisfiability oracle: "does a feasible path cheaper than the bound
//! exist?" answered by one of two interchangeable backends.
//!
//! Every SAT answer is re-verified before release: the model is decoded and
//! checked against the exact geometric predicate and the exact cost bound,
//! and the counterexample cost is recomputed from the model rather than
//! trusted from backend output. A model that fails verification is reported
//! as a backend error, never as SAT.

mod builtin;
pub mod smtlib;

use std::time::{Duration, Instant};

use num_bigint::BigInt;

use crate::cost::Cost;
use crate::encoder::OracleQuery;
use crate::geometry::{path_cost, path_feasible};
use crate::scenario::{grid_path_to_real, GridPath};

/// Oracle answer. SAT carries the verified counterexample and its exact,
/// recomputed cost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Sat { model: GridPath, cost: Cost },
    Unsat,
    Timeout,
    BackendError { detail: String },
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BackendKind {
    /// Exact in-process decision by branch-and-bound over the grid.
    Builtin,
    /// External SMT-LIB 2 solver, one stateless process per query.
    External { command: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackendSpec {
    pub kind: BackendKind,
    /// Per-query budget; `None` means unbounded.
    pub timeout: Option<Duration>,
}

impl BackendSpec {
    pub fn builtin() -> Self {
        Self {
            kind: BackendKind::Builtin,
            timeout: None,
        }
    }

    pub fn external(command: impl Into<String>) -> Self {
        Self {
            kind: BackendKind::External {
                command: command.into(),
            },
            timeout: None,
        }
    }

    pub fn with_timeout(mut self, timeout: Option<Duration>) -> Self {
        self.timeout = timeout;
        self
    }

    pub fn label(&self) -> String {
        match &self.kind {
            BackendKind::Builtin => "builtin".into(),
            BackendKind::External { command } => format!("smtlib ({command})"),
        }
    }
}

/// Raw backend answer before model verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum RawOutcome {
    Sat(Vec<BigInt>),
    Unsat,
    Timeout,
    Error(String),
}

/// Decides a query with the given backend and verifies any model produced.
pub fn check(query: &OracleQuery, backend: &BackendSpec) -> Verdict {
    let raw = match &backend.kind {
        BackendKind::Builtin => {
            let deadline = backend.timeout.map(|t| Instant::now() + t);
            builtin::decide(query, deadline)
        }
        BackendKind::External { command } => smtlib::run_external(query, command, backend.timeout),
    };
    match raw {
        RawOutcome::Sat(assignment) => verify_model(query, &assignment),
        RawOutcome::Unsat => Verdict::Unsat,
        RawOutcome::Timeout => Verdict::Timeout,
        RawOutcome::Error(detail) => Verdict::BackendError { detail },
    }
}

/// Exact re-check of a candidate model: in the box, geometrically feasible,
/// and strictly cheaper than the query bound.
fn verify_model(query: &OracleQuery, assignment: &[BigInt]) -> Verdict {
    if assignment.len() != 2 * query.waypoint_count {
        return Verdict::BackendError {
            detail: format!(
                "model has {} values, expected {}",
                assignment.len(),
                2 * query.waypoint_count
            ),
        };
    }
    if !query.domain.contains(assignment) {
        return Verdict::BackendError {
            detail: "model assigns a coordinate outside the domain box".into(),
        };
    }
    let model = query.decode(assignment);
    let points = grid_path_to_real(&model, &query.scenario);
    if !path_feasible(&points, &query.scenario) {
        return Verdict::BackendError {
            detail: "model decodes to an infeasible path".into(),
        };
    }
    let cost = match path_cost(&points) {
        Ok(cost) => cost,
        Err(e) => {
            return Verdict::BackendError {
                detail: format!("model cost: {e}"),
            }
        }
    };
    if cost >= query.cost_bound {
        return Verdict::BackendError {
            detail: "model does not beat the cost bound".into(),
        };
    }
    Verdict::Sat { model, cost }
}
