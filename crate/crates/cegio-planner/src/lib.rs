//! Certified global path planning for 2-D mobile robots.
//!
//! The planner answers "what is the cheapest polyline from start to target
//! that clears every obstacle?" by counterexample-guided inductive
//! optimization: a satisfiability oracle is asked, over and over, whether a
//! feasible path strictly cheaper than the incumbent bound exists. Each SAT
//! answer is a counterexample that becomes the new incumbent; an UNSAT
//! answer certifies the incumbent as optimal at the current grid, after
//! which the search escalates the waypoint count and then refines the grid
//! by one decimal place, up to the configured precision.
//!
//! All geometry and all certificates are exact: coordinates are rationals,
//! path lengths are exact sums of square roots, and every counterexample is
//! re-verified against the exact feasibility predicate before it is
//! accepted. Two oracle backends are provided: a deterministic in-process
//! branch-and-bound over the integer grid, and a driver for any external
//! SMT-LIB 2 solver process.
//!
//! ## Crate tour
//!
//! - [`scenario`] — environments, scenario files, grid paths
//! - [`geometry`] — exact segment/circle primitives and the feasibility
//!   predicate
//! - [`cost`] — exact radical arithmetic for path lengths
//! - [`encoder`] — scenario → polynomial constraint system
//! - [`oracle`] — the oracle contract and both backends
//! - [`engine`] — the optimization loop
//! - [`trace`], [`svg`] — convergence CSV and SVG artifacts
//! - [`cli`] — the command-line front end (`cegio-planner` binary)
//!
//! ## Runnable examples
//!
//! ```text
//! examples/
//! ├── optimize_setting1.rs   # end-to-end run on the single-obstacle scene
//! ├── optimize_setting2.rs   # two obstacles
//! ├── certified_optimum.rs   # engine answer vs exhaustive enumeration
//! ├── step_size_tradeoff.rs  # δ = 10⁻² vs 10⁻⁴ on the same scene
//! ├── exact_geometry.rs      # clearance and cost primitives, exactly
//! ├── scenario_files.rs      # write, load, and validate scenario files
//! ├── smtlib_script.rs       # emit the SMT-LIB query (and run a solver)
//! └── render_svg.rs          # draw an environment and a path
//! ```
//!
//! Each runs with `cargo run --example <name>`. The same capabilities are
//! available from the command line:
//!
//! ```text
//! cargo run -- --scenario setting1 --trace-csv trace.csv --svg-out path.svg
//! ```

pub mod cli;
pub mod cost;
pub mod decimal;
pub mod encoder;
pub mod engine;
pub mod geometry;
pub mod oracle;
pub mod scenario;
pub mod svg;
pub mod trace;

pub use cost::Cost;
pub use encoder::{encode, DomainBox, OracleQuery};
pub use engine::{optimize, EngineConfig, InitialBound, OptimizeResult, RunStatus};
pub use geometry::{path_cost, path_feasible, Circle, Point, Segment};
pub use oracle::{check, BackendSpec, Verdict};
pub use scenario::{grid_path_to_real, load_scenario, GridPath, Scenario};
pub use trace::{emit_trace_csv, parse_trace_csv, ConvergenceTrace};
