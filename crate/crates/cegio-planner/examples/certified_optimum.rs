//! Certification in action: the engine's answer on a one-waypoint coarse
//! grid equals the optimum found by brute-force enumeration of all 121
//! cells, and the oracle flips from SAT to UNSAT exactly at that optimum.
//!
//! ```text
//! cargo run --example certified_optimum
//! ```

use cegio_planner::cost::Cost;
use cegio_planner::encoder::{encode, DomainBox};
use cegio_planner::engine::{optimize, EngineConfig, InitialBound};
use cegio_planner::geometry::{path_cost, path_feasible, Point};
use cegio_planner::oracle::{check, BackendSpec, Verdict};
use cegio_planner::scenario::setting1;
use num_rational::BigRational;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn main() {
    let scenario = setting1();

    // Independent oracle: try every grid cell as the single waypoint.
    let mut optimum: Option<Cost> = None;
    for x in 0..=10 {
        for y in 0..=10 {
            let candidate = vec![
                scenario.start.clone(),
                Point::new(rat(x, 1), rat(y, 1)),
                scenario.target.clone(),
            ];
            if path_feasible(&candidate, &scenario) {
                let cost = path_cost(&candidate).unwrap();
                if optimum.as_ref().is_none_or(|best| cost < *best) {
                    optimum = Some(cost);
                }
            }
        }
    }
    let optimum = optimum.expect("some midpoint is feasible");
    println!("enumeration optimum (121 cells): {:.9} m", optimum.to_f64());

    // The engine reaches the same value through counterexamples alone.
    let config = EngineConfig {
        eta: 0,
        step: rat(1, 10_000),
        max_waypoints: 1,
        initial_bound: InitialBound::Explicit(rat(25, 1)),
        ..EngineConfig::default()
    };
    let result = optimize(&scenario, &config, &BackendSpec::builtin()).unwrap();
    let engine_cost = result.cost.unwrap();
    println!("engine certificate:              {:.9} m", engine_cost.to_f64());
    assert_eq!(engine_cost, optimum, "exact agreement, not approximate");

    // The boundary is exact: a bound AT the optimum is UNSAT, any positive
    // slack makes it SAT. This is what exact arithmetic buys.
    let domain = DomainBox::full(&scenario, 1, 1);
    let at = check(
        &encode(&scenario, 1, 1, &domain, &optimum).unwrap(),
        &BackendSpec::builtin(),
    );
    println!("oracle at bound = optimum:        {:?}", at);
    assert_eq!(at, Verdict::Unsat);

    let slack = Cost::from_rational(rat(1, 1000));
    let above = check(
        &encode(&scenario, 1, 1, &domain, &(&optimum + &slack)).unwrap(),
        &BackendSpec::builtin(),
    );
    println!("oracle at bound = optimum+0.001:  SAT = {}", above.is_sat());
    assert!(above.is_sat());
}
