//! Render an environment and a path to SVG: obstacles as filled circles,
//! dashed safety rings at r+σ, start/target markers, the path as a
//! polyline. Same inputs, same bytes, every time.
//!
//! ```text
//! cargo run --example render_svg
//! ```

use cegio_planner::engine::{optimize, EngineConfig};
use cegio_planner::oracle::BackendSpec;
use cegio_planner::scenario::setting2;
use cegio_planner::svg::{emit_svg, SvgOptions};

fn main() {
    let scenario = setting2();
    let config = EngineConfig {
        eta: 0, // coarse grid keeps this example instant
        ..EngineConfig::default()
    };
    let result = optimize(&scenario, &config, &BackendSpec::builtin()).unwrap();
    let path = result.path.expect("feasible path");

    let options = SvgOptions { scale: 48.0, margin: 16.0 };
    let svg = emit_svg(&scenario, &path, &options).unwrap();

    let out = std::env::temp_dir().join("cegio-planner");
    std::fs::create_dir_all(&out).unwrap();
    let file = out.join("setting2-path.svg");
    std::fs::write(&file, &svg).unwrap();

    println!("{} bytes of SVG", svg.len());
    println!("wrote {}", file.display());
    println!("\nfirst lines:");
    for line in svg.lines().take(6) {
        println!("  {line}");
    }
}
