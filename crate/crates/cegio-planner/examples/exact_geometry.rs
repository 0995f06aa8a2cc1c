//! The geometric primitives work over exact rationals: clearance tests have
//! no tolerance knob, and path lengths are exact sums of square roots that
//! compare correctly even when doubles cannot tell them apart.
//!
//! ```text
//! cargo run --example exact_geometry
//! ```

use cegio_planner::cost::Cost;
use cegio_planner::geometry::{
    path_cost, segment_clearance_sq, segment_clears, Circle, Point, Segment,
};
use num_rational::BigRational;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn pt(x: i64, y: i64) -> Point {
    Point::new(rat(x, 1), rat(y, 1))
}

fn main() {
    // Minimum squared distance from a segment to a point, in closed form.
    let floor = Segment::new(pt(1, 1), pt(9, 1));
    let center = pt(5, 5);
    let clearance = segment_clearance_sq(&floor, &center);
    println!("clearance² of (5,5) from the segment (1,1)–(9,1): {clearance} (exactly 16)");

    // The obstacle test is a plain comparison against (r+σ)², so touching
    // the safety ring exactly is allowed and decided without any epsilon.
    let obstacle = Circle { center: pt(5, 5), radius: rat(5, 2) };
    let sigma = rat(1, 2);
    let touching = Segment::new(pt(2, 5), pt(2, 5));
    println!(
        "degenerate segment at distance 3 with r+σ = 3 clears: {}",
        segment_clears(&touching, &obstacle, &sigma)
    );

    // Path lengths are Σ√(…): irrational, represented exactly.
    let corner = vec![pt(1, 1), pt(9, 1), pt(9, 9)];
    let diagonal = vec![pt(1, 1), pt(9, 9)];
    let corner_cost = path_cost(&corner).unwrap();
    let diagonal_cost = path_cost(&diagonal).unwrap();
    println!("corner route cost: {} (exactly 16)", corner_cost.to_f64());
    println!("diagonal cost:     {} (exactly 8√2)", diagonal_cost.to_f64());

    // 8√2 = 11.313708498984760…; doubles round both of these bounds to the
    // same value, the exact comparison does not.
    let low = Cost::from_rational(rat(11_313_708_498_984_760, 1_000_000_000_000_000));
    let high = Cost::from_rational(rat(11_313_708_498_984_761, 1_000_000_000_000_000));
    println!(
        "8√2 > 11.313708498984760: {}   (f64 sees {:.17} for both bounds)",
        diagonal_cost > low,
        low.to_f64()
    );
    println!("8√2 < 11.313708498984761: {}", diagonal_cost < high);
    assert!(diagonal_cost > low && diagonal_cost < high);

    // Radical arithmetic canonicalizes: √50 + √2 collapses to 6√2.
    let a = Cost::sqrt_rational(&rat(50, 1));
    let b = Cost::sqrt_rational(&rat(2, 1));
    let six_sqrt2 = Cost::sqrt_rational(&rat(72, 1));
    assert_eq!(&a + &b, six_sqrt2);
    println!("√50 + √2 == √72 structurally: true");
}
