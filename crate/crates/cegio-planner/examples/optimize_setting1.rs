//! End-to-end run on the single-obstacle scene: optimize, print the
//! convergence trace, and write the CSV and SVG artifacts.
//!
//! ```text
//! cargo run --example optimize_setting1
//! ```

use cegio_planner::engine::{optimize_with_progress, EngineConfig};
use cegio_planner::oracle::BackendSpec;
use cegio_planner::scenario::setting1;
use cegio_planner::svg::{emit_svg, SvgOptions};
use cegio_planner::trace::emit_trace_csv;

fn main() {
    let scenario = setting1();
    let config = EngineConfig::default(); // 10 cm target grid, δ = 1 cm

    println!("scene: 10×10 m box, obstacle r=2.5 at (5,5), safety margin 0.5");
    println!("searching…\n");

    let result = optimize_with_progress(&scenario, &config, &BackendSpec::builtin(), |record| {
        println!(
            "  call {:>3}  p={:<3} m={}  J_c={:>10.6}  {}",
            record.iteration,
            record.precision,
            record.waypoints,
            record.bound.to_f64(),
            record.verdict.as_str()
        );
    })
    .expect("engine run");

    let path = result.path.as_ref().expect("a feasible path exists");
    println!("\nstatus: {:?}", result.status);
    println!("cost:   {:.6} m", result.cost.as_ref().unwrap().to_f64());
    print!("path:  ");
    for point in path {
        let (x, y) = point.to_f64();
        print!(" ({x:.2}, {y:.2})");
    }
    println!();

    let dir = std::env::temp_dir().join("cegio-planner");
    std::fs::create_dir_all(&dir).unwrap();
    let csv_path = dir.join("setting1-trace.csv");
    let svg_path = dir.join("setting1-path.svg");
    std::fs::write(&csv_path, emit_trace_csv(&result.trace.without_timing())).unwrap();
    std::fs::write(
        &svg_path,
        emit_svg(&scenario, path, &SvgOptions::default()).unwrap(),
    )
    .unwrap();
    println!("\nwrote {}", csv_path.display());
    println!("wrote {}", svg_path.display());
}
