//! What a query looks like on the wire: the complete SMT-LIB 2 script for
//! one oracle question. If a solver is installed (or named through
//! CEGIO_SOLVER_CMD), the query is also decided externally and the verified
//! counterexample printed.
//!
//! ```text
//! cargo run --example smtlib_script
//! CEGIO_SOLVER_CMD="z3 -in" cargo run --example smtlib_script
//! ```

use std::time::Duration;

use cegio_planner::cost::Cost;
use cegio_planner::encoder::{encode, DomainBox};
use cegio_planner::oracle::{check, smtlib, BackendSpec, Verdict};
use cegio_planner::scenario::{grid_path_to_real, setting1};

fn main() {
    let scenario = setting1();
    let domain = DomainBox::full(&scenario, 1, 1);
    let bound = Cost::from_integer(25);
    let query = encode(&scenario, 1, 1, &domain, &bound).unwrap();

    println!("--- SMT-LIB 2 script (one waypoint, bound 25 m) ---");
    print!("{}", smtlib::emit(&query));

    let command = std::env::var("CEGIO_SOLVER_CMD").ok().or_else(|| {
        std::process::Command::new("z3")
            .arg("--version")
            .stdout(std::process::Stdio::null())
            .stderr(std::process::Stdio::null())
            .status()
            .ok()
            .filter(|s| s.success())
            .map(|_| "z3 -in".to_string())
    });
    let Some(command) = command else {
        println!("\n(no external solver found; set CEGIO_SOLVER_CMD to run one)");
        return;
    };

    println!("\n--- running `{command}` ---");
    let backend = BackendSpec::external(command).with_timeout(Some(Duration::from_secs(30)));
    match check(&query, &backend) {
        Verdict::Sat { model, cost } => {
            println!("sat; verified counterexample, exact cost {:.6} m", cost.to_f64());
            for point in grid_path_to_real(&model, &scenario) {
                let (x, y) = point.to_f64();
                println!("  ({x}, {y})");
            }
        }
        other => println!("{other:?}"),
    }
}
