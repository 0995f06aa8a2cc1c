//! The two-obstacle scene: the path has to thread between an obstacle near
//! the diagonal and a larger one close to the target.
//!
//! ```text
//! cargo run --example optimize_setting2
//! ```

use cegio_planner::engine::{optimize, EngineConfig};
use cegio_planner::geometry::{distance, path_feasible};
use cegio_planner::oracle::BackendSpec;
use cegio_planner::scenario::setting2;

fn main() {
    let scenario = setting2();
    println!("scene: obstacles r=1 at (2,4) and r=1.5 at (7,8), margin 0.5");

    let result = optimize(&scenario, &EngineConfig::default(), &BackendSpec::builtin())
        .expect("engine run");

    let path = result.path.as_ref().expect("a feasible path exists");
    let cost = result.cost.as_ref().unwrap();
    println!("status: {:?}", result.status);
    println!("cost:   {:.6} m", cost.to_f64());
    print!("path:  ");
    for point in path {
        let (x, y) = point.to_f64();
        print!(" ({x:.2}, {y:.2})");
    }
    println!();

    // both facts the engine guarantees, checked out loud
    assert!(path_feasible(path, &scenario));
    let straight = distance(&scenario.start, &scenario.target);
    assert!(*cost >= straight);
    println!(
        "\nfeasible: yes; ≥ straight-line lower bound {:.6}: yes",
        straight.to_f64()
    );
    println!(
        "oracle calls: {} ({} accepted counterexamples)",
        result.trace.len(),
        result.trace.sat_records().len()
    );
}
