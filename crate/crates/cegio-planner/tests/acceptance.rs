//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Independent oracles (unpruned enumeration) live in `common` and never
//! call into the library's search code. Engine runs shared by several
//! criteria are computed once.

mod common;

use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};



use cegio_planner::cost::Cost;
use cegio_planner::encoder::{encode, DomainBox};
use cegio_planner::engine::{optimize, EngineConfig, OptimizeResult, RunStatus};
use cegio_planner::geometry::{distance, path_cost, path_feasible, Circle, Point};
use cegio_planner::oracle::{check, BackendSpec, Verdict};
use cegio_planner::scenario::{load_scenario, setting1, setting2, Scenario, ScenarioError};
use cegio_planner::trace::TraceVerdict;

use common::{enumerate_single_waypoint_optimum, naive_decide, rat, Lcg};

struct SharedRuns {
    /// setting1 with the CLI default configuration (η=1, δ=1e-2, ≤3 points).
    setting1_default: OptimizeResult,
    /// setting2, same configuration.
    setting2_default: OptimizeResult,
    /// setting1 at p=1, single waypoint, δ=1e-4 (the certification run).
    setting1_certification: OptimizeResult,
    certification_elapsed: Duration,
    /// Same but δ=1e-2, for the step-size comparison.
    setting1_coarse_step: OptimizeResult,
    /// Straight-line scene: no obstacles at all.
    no_obstacle: OptimizeResult,
    no_obstacle_elapsed: Duration,
    /// Independent enumeration optimum for setting1, m=1, p=1.
    single_waypoint_optimum: Cost,
}

fn no_obstacle_scenario() -> Scenario {
    let base = setting1();
    Scenario::new(base.bounds, Vec::new(), rat(0, 1), base.start, base.target).unwrap()
}

fn fixed_m1_config(step_num: i64, step_den: i64) -> EngineConfig {
    EngineConfig {
        eta: 0,
        step: rat(step_num, step_den),
        initial_waypoints: 1,
        max_waypoints: 1,
        ..EngineConfig::default()
    }
}

fn runs() -> &'static SharedRuns {
    static RUNS: OnceLock<SharedRuns> = OnceLock::new();
    RUNS.get_or_init(|| {
        let builtin = BackendSpec::builtin();
        let default_cfg = EngineConfig::default();

        let setting1_default = optimize(&setting1(), &default_cfg, &builtin).unwrap();
        let setting2_default = optimize(&setting2(), &default_cfg, &builtin).unwrap();

        let started = Instant::now();
        let setting1_certification =
            optimize(&setting1(), &fixed_m1_config(1, 10_000), &builtin).unwrap();
        let certification_elapsed = started.elapsed();

        let setting1_coarse_step =
            optimize(&setting1(), &fixed_m1_config(1, 100), &builtin).unwrap();

        let started = Instant::now();
        let no_obstacle =
            optimize(&no_obstacle_scenario(), &fixed_m1_config(1, 100), &builtin).unwrap();
        let no_obstacle_elapsed = started.elapsed();

        SharedRuns {
            setting1_default,
            setting2_default,
            setting1_certification,
            certification_elapsed,
            setting1_coarse_step,
            no_obstacle,
            no_obstacle_elapsed,
            single_waypoint_optimum: enumerate_single_waypoint_optimum(&setting1()).unwrap(),
        }
    })
}

/// Criterion 1: with one waypoint on the coarse grid, the engine's certified
/// cost matches the exhaustive-enumeration optimum within δ = 10⁻⁴, in
/// under 10 seconds.
#[test]
fn criterion_1_grid_optimality_certification() {
    let shared = runs();
    let run = &shared.setting1_certification;
    assert_eq!(run.status, RunStatus::OptimalAtPrecision);
    let cost = run.cost.clone().unwrap();
    let optimum = shared.single_waypoint_optimum.clone();
    let delta = Cost::from_rational(rat(1, 10_000));
    assert!(cost >= optimum, "engine beat the enumeration optimum");
    assert!(
        &cost - &optimum <= delta,
        "certified cost {} not within 1e-4 of enumeration optimum {}",
        cost.to_f64(),
        optimum.to_f64()
    );
    assert!(
        shared.certification_elapsed < Duration::from_secs(10),
        "certification took {:?}",
        shared.certification_elapsed
    );
    println!(
        "acceptance 1 (grid-optimality certification): PASS — engine {:.6} vs enumeration {:.6} in {:?}",
        cost.to_f64(),
        optimum.to_f64(),
        shared.certification_elapsed
    );
}

fn random_query_scenarios(count: usize) -> Vec<(Scenario, Cost)> {
    let mut lcg = Lcg::new(0x5eed_cafe);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let cx = lcg.range(30, 70);
        let cy = lcg.range(30, 70);
        let radius = lcg.range(10, 30);
        let bound_hundredths = lcg.range(1000, 3000);
        let scenario = Scenario::new(
            setting1().bounds,
            vec![Circle {
                center: Point::new(rat(cx, 10), rat(cy, 10)),
                radius: rat(radius, 10),
            }],
            rat(1, 2),
            setting1().start,
            setting1().target,
        );
        // centers too close to an endpoint are invalid; just draw again
        if let Ok(scenario) = scenario {
            out.push((scenario, Cost::from_rational(rat(bound_hundredths, 100))));
        }
    }
    out
}

fn detect_external_solver() -> Option<String> {
    if let Ok(cmd) = std::env::var("CEGIO_SOLVER_CMD") {
        if !cmd.trim().is_empty() {
            return Some(cmd);
        }
    }
    for (probe, command) in [("z3", "z3 -in"), ("cvc5", "cvc5"), ("cvc4", "cvc4 --lang smt2")] {
        let found = Command::new(probe)
            .arg("--version")
            .stdout(std::process::Stdio::null())
            .stderr(std::process::Stdio::null())
            .status()
            .map(|s| s.success())
            .unwrap_or(false);
        if found {
            return Some(command.to_string());
        }
    }
    None
}

/// Criterion 2: builtin agrees with unpruned enumeration on 200 randomized
/// queries (always), and with an external SMT-LIB solver when one is
/// installed (skipped with a message otherwise).
#[test]
fn criterion_2_backend_equivalence() {
    let cases = random_query_scenarios(200);
    let builtin = BackendSpec::builtin();

    for (i, (scenario, bound)) in cases.iter().enumerate() {
        let domain = DomainBox::full(scenario, 1, 1);
        let query = encode(scenario, 1, 1, &domain, bound).unwrap();
        let fast = check(&query, &builtin);
        let reference = naive_decide(&query);
        match (&fast, &reference) {
            (Verdict::Sat { model, .. }, Some(assignment)) => {
                let expected = query.decode(assignment);
                assert_eq!(model, &expected, "case {i}: model mismatch");
            }
            (Verdict::Unsat, None) => {}
            other => panic!("case {i}: builtin vs enumeration disagree: {other:?}"),
        }
    }
    println!("acceptance 2 (backend equivalence): PASS — builtin vs enumeration, 200/200 agree");

    match detect_external_solver() {
        Some(command) => {
            let external = BackendSpec::external(command.clone())
                .with_timeout(Some(Duration::from_secs(30)));
            let mut disagreements = 0;
            for (i, (scenario, bound)) in cases.iter().enumerate() {
                let domain = DomainBox::full(scenario, 1, 1);
                let query = encode(scenario, 1, 1, &domain, bound).unwrap();
                let ours = check(&query, &builtin).is_sat();
                match check(&query, &external) {
                    Verdict::Sat { .. } if ours => {}
                    Verdict::Unsat if !ours => {}
                    Verdict::Timeout => panic!("case {i}: external solver timed out"),
                    Verdict::BackendError { detail } => {
                        panic!("case {i}: external solver error: {detail}")
                    }
                    _ => disagreements += 1,
                }
            }
            assert_eq!(disagreements, 0, "SAT/UNSAT disagreements with `{command}`");
            println!(
                "acceptance 2 (backend equivalence, external): PASS — builtin vs `{command}`, 200/200 agree"
            );
        }
        None => {
            println!(
                "acceptance 2 (backend equivalence, external): SKIPPED — no SMT solver found \
                 (set CEGIO_SOLVER_CMD or install z3/cvc5); builtin-vs-enumeration agreement ran unconditionally"
            );
        }
    }
}

/// Criterion 3: every counterexample path and every final path across the
/// acceptance runs passes the exact feasibility predicate.
#[test]
fn criterion_3_feasibility_soundness() {
    let shared = runs();
    let mut checked = 0usize;
    for (scenario, run) in [
        (setting1(), &shared.setting1_default),
        (setting2(), &shared.setting2_default),
        (setting1(), &shared.setting1_certification),
        (setting1(), &shared.setting1_coarse_step),
        (no_obstacle_scenario(), &shared.no_obstacle),
    ] {
        for record in run.trace.records() {
            if let Some(points) = &record.path {
                assert!(
                    path_feasible(points, &scenario),
                    "counterexample at call {} is infeasible",
                    record.iteration
                );
                checked += 1;
            }
        }
        if let Some(points) = &run.path {
            assert!(path_feasible(points, &scenario), "final path infeasible");
            checked += 1;
        }
    }
    assert!(checked > 0);
    println!("acceptance 3 (feasibility soundness): PASS — {checked}/{checked} paths feasible");
}

/// Smallest K with K·δ ≥ gap, by binary search over exact comparisons.
fn ceil_div_cost(gap: &Cost, delta: &Cost) -> u64 {
    assert!(delta.sign() == std::cmp::Ordering::Greater);
    if gap.sign() != std::cmp::Ordering::Greater {
        return 0;
    }
    let mut lo = 0u64;
    let mut hi = 1u64;
    let times = |k: u64| delta.scale(&rat(k as i64, 1));
    while times(hi) < *gap {
        hi *= 2;
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if times(mid) >= *gap {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Criterion 4: accepted-cost sequences strictly decrease with gaps ≥ δ,
/// and the SAT-iteration count at fixed (m, p, Ω) respects the
/// ⌈(J₀−J_opt)/δ⌉+1 bound.
#[test]
fn criterion_4_monotone_convergence() {
    let shared = runs();
    let named_runs: [(&str, &OptimizeResult, Cost); 5] = [
        ("setting1-default", &shared.setting1_default, Cost::from_rational(rat(1, 100))),
        ("setting2-default", &shared.setting2_default, Cost::from_rational(rat(1, 100))),
        (
            "setting1-certification",
            &shared.setting1_certification,
            Cost::from_rational(rat(1, 10_000)),
        ),
        ("setting1-coarse", &shared.setting1_coarse_step, Cost::from_rational(rat(1, 100))),
        ("no-obstacle", &shared.no_obstacle, Cost::from_rational(rat(1, 100))),
    ];
    for (name, run, delta) in &named_runs {
        let mut previous: Option<Cost> = None;
        for record in run.trace.records() {
            if record.verdict != TraceVerdict::Sat {
                continue;
            }
            let accepted = path_cost(record.path.as_ref().unwrap()).unwrap();
            if let Some(prev) = &previous {
                let gap = prev - &accepted;
                assert!(
                    gap >= *delta,
                    "{name}: accepted-cost gap below δ at call {}",
                    record.iteration
                );
            }
            previous = Some(accepted);
        }
    }

    // Iteration-count bound, checked on the fixed (m=1, p=1) run where the
    // independent optimum is known.
    let run = &shared.setting1_certification;
    let delta = Cost::from_rational(rat(1, 10_000));
    let initial = Cost::from_rational(rat(40, 1));
    let gap = &initial - &shared.single_waypoint_optimum;
    let bound = ceil_div_cost(&gap, &delta) + 1;
    let sat_count = run.trace.count(TraceVerdict::Sat) as u64;
    assert!(
        sat_count <= bound,
        "SAT iterations {sat_count} exceed the ⌈(J₀−J_opt)/δ⌉+1 bound {bound}"
    );
    println!(
        "acceptance 4 (monotone convergence): PASS — gaps ≥ δ on 5 runs; {sat_count} SAT iterations ≤ bound {bound}"
    );
}

/// Criterion 5: final costs never beat the straight-line lower bound 8√2,
/// and the no-obstacle run converges to it within δ in under 5 seconds.
#[test]
fn criterion_5_lower_bound_sanity() {
    let shared = runs();
    let straight = Cost::sqrt_rational(&rat(128, 1)); // 8√2
    for (name, run) in [
        ("setting1", &shared.setting1_default),
        ("setting2", &shared.setting2_default),
    ] {
        let cost = run.cost.clone().unwrap();
        assert!(cost >= straight, "{name} final cost below 8√2");
    }
    let no_obstacle_cost = shared.no_obstacle.cost.clone().unwrap();
    assert!(no_obstacle_cost >= straight);
    assert!(
        &no_obstacle_cost - &straight <= Cost::from_rational(rat(1, 100)),
        "no-obstacle run did not converge to within δ of 8√2"
    );
    assert!(
        shared.no_obstacle_elapsed < Duration::from_secs(5),
        "no-obstacle run took {:?}",
        shared.no_obstacle_elapsed
    );
    println!(
        "acceptance 5 (lower-bound sanity): PASS — all finals ≥ 8√2; no-obstacle at {:.6} in {:?}",
        no_obstacle_cost.to_f64(),
        shared.no_obstacle_elapsed
    );
}

/// Criterion 6: the coarse step (10⁻²) uses no more oracle calls than the
/// fine step (10⁻⁴) and lands within 10⁻² of its final cost.
#[test]
fn criterion_6_step_size_behavior() {
    let shared = runs();
    let coarse = &shared.setting1_coarse_step;
    let fine = &shared.setting1_certification;
    assert!(
        coarse.trace.len() <= fine.trace.len(),
        "coarse step used more oracle calls ({} > {})",
        coarse.trace.len(),
        fine.trace.len()
    );
    let coarse_cost = coarse.cost.clone().unwrap();
    let fine_cost = fine.cost.clone().unwrap();
    let diff = if coarse_cost >= fine_cost {
        &coarse_cost - &fine_cost
    } else {
        &fine_cost - &coarse_cost
    };
    assert!(
        diff <= Cost::from_rational(rat(1, 100)),
        "final costs differ by more than 1e-2"
    );
    println!(
        "acceptance 6 (step-size behavior): PASS — {} calls at δ=1e-2 vs {} at δ=1e-4, finals within 1e-2",
        coarse.trace.len(),
        fine.trace.len()
    );
}

/// Criterion 7: two consecutive CLI runs produce byte-identical trace CSV
/// and SVG artifacts.
#[test]
fn criterion_7_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_cegio-planner");
    let artifacts = |tag: &str| {
        (
            dir.path().join(format!("trace-{tag}.csv")),
            dir.path().join(format!("path-{tag}.svg")),
        )
    };
    for tag in ["a", "b"] {
        let (csv, svg) = artifacts(tag);
        let status = Command::new(bin)
            .args(["--scenario", "setting1", "--trace-csv"])
            .arg(&csv)
            .arg("--svg-out")
            .arg(&svg)
            .stdout(std::process::Stdio::null())
            .stderr(std::process::Stdio::null())
            .status()
            .unwrap();
        assert!(status.success(), "run {tag} failed");
    }
    let (csv_a, svg_a) = artifacts("a");
    let (csv_b, svg_b) = artifacts("b");
    let csv_bytes_a = std::fs::read(csv_a).unwrap();
    let csv_bytes_b = std::fs::read(csv_b).unwrap();
    let svg_bytes_a = std::fs::read(svg_a).unwrap();
    let svg_bytes_b = std::fs::read(svg_b).unwrap();
    assert_eq!(csv_bytes_a, csv_bytes_b, "trace CSV differs between runs");
    assert_eq!(svg_bytes_a, svg_bytes_b, "SVG differs between runs");
    assert!(common::xml_well_formed(std::str::from_utf8(&svg_bytes_a).unwrap()));
    println!(
        "acceptance 7 (determinism): PASS — {} CSV bytes and {} SVG bytes identical across runs",
        csv_bytes_a.len(),
        svg_bytes_a.len()
    );
}

/// Criterion 8: the three invalid-scenario cases are rejected with the
/// violated invariant named in the error.
#[test]
fn criterion_8_scenario_validation() {
    let base = r#"{
        "format": 1,
        "bounds": [0, 10, 0, 10],
        "start": [1, 1],
        "target": [9, 9],
        "sigma": 0.5,
        "obstacles": [{"center": [5, 5], "radius": 2.5}]
    }"#;

    let start_inside = base.replace("\"start\": [1, 1]", "\"start\": [5, 5]");
    let err = load_scenario(&start_inside).unwrap_err();
    assert!(matches!(err, ScenarioError::StartInsideInflatedObstacle { .. }));
    assert!(err.to_string().contains("start inside inflated obstacle"));

    let target_outside = base.replace("\"target\": [9, 9]", "\"target\": [9, 11]");
    let err = load_scenario(&target_outside).unwrap_err();
    assert!(matches!(err, ScenarioError::TargetOutsideBounds));
    assert!(err.to_string().contains("target outside bounds"));

    let bad_radius = base.replace("\"radius\": 2.5", "\"radius\": -1");
    let err = load_scenario(&bad_radius).unwrap_err();
    assert!(matches!(err, ScenarioError::NonPositiveRadius { .. }));
    assert!(err.to_string().contains("non-positive radius"));

    println!("acceptance 8 (scenario validation): PASS — all three invalid cases rejected by name");
}

/// The engine result invariants hold across the shared runs (supports
/// criteria 3–5): statuses are as expected and cost equals the exact path
/// cost of the reported path.
#[test]
fn shared_runs_are_well_formed() {
    let shared = runs();
    for run in [
        &shared.setting1_default,
        &shared.setting2_default,
        &shared.setting1_certification,
        &shared.setting1_coarse_step,
        &shared.no_obstacle,
    ] {
        assert_eq!(run.status, RunStatus::OptimalAtPrecision);
        let path = run.path.as_ref().unwrap();
        let cost = run.cost.clone().unwrap();
        assert_eq!(path_cost(path).unwrap(), cost);
        assert!(!cost.is_zero());
        assert!(cost >= distance(&path[0], path.last().unwrap()));
    }
    // the certification run stayed on the coarse grid with one waypoint
    let grid = shared.setting1_certification.grid_path.as_ref().unwrap();
    assert_eq!(grid.precision, 1);
    assert_eq!(grid.waypoints.len(), 1);
    // sanity anchor: the enumeration optimum for this grid is 10√2
    assert_eq!(
        shared.single_waypoint_optimum,
        Cost::sqrt_rational(&rat(200, 1))
    );
}
