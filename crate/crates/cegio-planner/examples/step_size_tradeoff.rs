//! The improvement step δ trades answer tightness against oracle calls:
//! a larger step converges in fewer, cheaper iterations but only promises
//! the optimum to within δ.
//!
//! ```text
//! cargo run --example step_size_tradeoff
//! ```

use std::time::Instant;

use cegio_planner::engine::{optimize, EngineConfig};
use cegio_planner::oracle::BackendSpec;
use cegio_planner::scenario::setting1;
use num_rational::BigRational;

fn main() {
    let scenario = setting1();
    println!("single-obstacle scene, one waypoint, coarse grid\n");
    println!("{:>10}  {:>12}  {:>12}  {:>10}", "step δ", "oracle calls", "final cost", "time");

    let mut finals = Vec::new();
    for (label, num, den) in [("1e-1", 1i64, 10i64), ("1e-2", 1, 100), ("1e-4", 1, 10_000)] {
        let config = EngineConfig {
            eta: 0,
            step: BigRational::new(num.into(), den.into()),
            max_waypoints: 1,
            ..EngineConfig::default()
        };
        let started = Instant::now();
        let result = optimize(&scenario, &config, &BackendSpec::builtin()).unwrap();
        let elapsed = started.elapsed();
        let cost = result.cost.unwrap();
        println!(
            "{label:>10}  {:>12}  {:>12.6}  {:>9.1?}",
            result.trace.len(),
            cost.to_f64(),
            elapsed
        );
        finals.push((label, cost));
    }

    // Coarser steps never do more work, and every answer lies within its
    // own δ of the finest one.
    let finest = finals.pop().unwrap().1;
    println!();
    for (label, cost) in &finals {
        let gap = cost.clone() - finest.clone();
        println!("δ={label}: final is {:.6} above the δ=1e-4 answer", gap.to_f64());
    }
}
