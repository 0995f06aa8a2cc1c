//! Scenario files: write one, load it back, and see how validation rejects
//! broken environments by naming the violated invariant.
//!
//! ```text
//! cargo run --example scenario_files
//! ```

use cegio_planner::scenario::{emit_scenario, load_scenario, setting2};

fn main() {
    // Serialize a built-in scene and load it back: lossless round trip.
    let scenario = setting2();
    let text = emit_scenario(&scenario).unwrap();
    println!("--- emitted scenario file ---\n{text}");
    assert_eq!(load_scenario(&text).unwrap(), scenario);
    println!("round trip: equal\n");

    // A custom scene from scratch.
    let custom = r#"{
        "format": 1,
        "bounds": [0, 20, 0, 12.5],
        "start": [0.5, 0.5],
        "target": [19.5, 12],
        "sigma": 0.25,
        "obstacles": [
            {"center": [6, 6], "radius": 2},
            {"center": [13.5, 4.5], "radius": 3.125}
        ]
    }"#;
    let loaded = load_scenario(custom).unwrap();
    println!("custom scene: {} obstacles, box {}×{} m\n",
        loaded.obstacles.len(),
        loaded.bounds.width(),
        loaded.bounds.height());

    // Validation failures name the broken invariant.
    let broken = [
        custom.replace("\"start\": [0.5, 0.5]", "\"start\": [6, 6]"),
        custom.replace("\"target\": [19.5, 12]", "\"target\": [25, 12]"),
        custom.replace("\"radius\": 2}", "\"radius\": 0}"),
        custom.replace("\"sigma\": 0.25", "\"sigma\": 0.1234567"),
        custom.replace("\"format\": 1", "\"format\": 7"),
    ];
    for text in &broken {
        let error = load_scenario(text).unwrap_err();
        println!("rejected: {error}");
    }
}
