//! Exact 2-D primitives: points, segments, circles, path cost, and the
//! segment–circle clearance predicate used for obstacle avoidance.
//!
//! Everything here is computed over rationals (or [`Cost`] for lengths), so
//! feasibility answers are bit-reproducible: no tolerance, no rounding.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::cost::Cost;
use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point {
    pub x: BigRational,
    pub y: BigRational,
}

impl Point {
    pub fn new(x: BigRational, y: BigRational) -> Self {
        Self { x, y }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (
            self.x.to_f64().unwrap_or(f64::NAN),
            self.y.to_f64().unwrap_or(f64::NAN),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Self { a, b }
    }
}

/// A circular obstacle. The safety margin σ is applied by the caller, not
/// stored here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circle {
    pub center: Point,
    pub radius: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("interpolation parameter {0} outside [0, 1]")]
    LambdaOutOfRange(String),
    #[error("a path needs at least 2 points, got {0}")]
    TooFewPoints(usize),
}

/// The point (1−λ)·a + λ·b on a segment, exactly.
pub fn segment_point(seg: &Segment, lambda: &BigRational) -> Result<Point, GeometryError> {
    if lambda.is_negative() || lambda > &BigRational::from_integer(1.into()) {
        return Err(GeometryError::LambdaOutOfRange(lambda.to_string()));
    }
    let one_minus = BigRational::from_integer(1.into()) - lambda;
    Ok(Point::new(
        &one_minus * &seg.a.x + lambda * &seg.b.x,
        &one_minus * &seg.a.y + lambda * &seg.b.y,
    ))
}

/// Exact Euclidean distance between two points.
pub fn distance(a: &Point, b: &Point) -> Cost {
    Cost::sqrt_rational(&distance_sq(a, b))
}

/// Exact squared Euclidean distance.
pub fn distance_sq(a: &Point, b: &Point) -> BigRational {
    let dx = &a.x - &b.x;
    let dy = &a.y - &b.y;
    &dx * &dx + &dy * &dy
}

/// Total polyline length Σ‖P_{i+1} − P_i‖₂ as an exact value.
pub fn path_cost(points: &[Point]) -> Result<Cost, GeometryError> {
    if points.len() < 2 {
        return Err(GeometryError::TooFewPoints(points.len()));
    }
    let mut total = Cost::zero();
    for pair in points.windows(2) {
        total = total + distance(&pair[0], &pair[1]);
    }
    Ok(total)
}

/// Minimum squared distance from a point to a segment, exactly.
///
/// Closed form: with w = b−a and u = c−a, the minimizing parameter is
/// t* = clamp((u·w)/(w·w), 0, 1) and the answer is ‖u − t*·w‖². Degenerate
/// segments (w·w = 0) reduce to point distance. No division by a possibly
/// zero direction component anywhere.
pub fn segment_clearance_sq(seg: &Segment, c: &Point) -> BigRational {
    let wx = &seg.b.x - &seg.a.x;
    let wy = &seg.b.y - &seg.a.y;
    let ux = &c.x - &seg.a.x;
    let uy = &c.y - &seg.a.y;
    let ww = &wx * &wx + &wy * &wy;
    let uu = &ux * &ux + &uy * &uy;
    if ww.is_zero() {
        return uu;
    }
    let uw = &ux * &wx + &uy * &wy;
    if uw.is_negative() {
        return uu; // foot before a: nearest point is a
    }
    if uw >= ww {
        // foot beyond b: nearest point is b
        let vx = &ux - &wx;
        let vy = &uy - &wy;
        return &vx * &vx + &vy * &vy;
    }
    // interior foot: (u·u·(w·w) − (u·w)²) / (w·w)
    (&uu * &ww - &uw * &uw) / ww
}

/// True iff the whole segment keeps distance ≥ r+σ from the obstacle center.
///
/// The inflated radius applies uniformly to interior and endpoints, and the
/// comparison is non-strict (≥), so touching the safety ring is allowed.
pub fn segment_clears(seg: &Segment, obstacle: &Circle, sigma: &BigRational) -> bool {
    let inflated = &obstacle.radius + sigma;
    segment_clearance_sq(seg, &obstacle.center) >= &inflated * &inflated
}

/// True iff every vertex lies in the environment box and every consecutive
/// segment clears every inflated obstacle. The box is convex, so vertex
/// containment implies containment of whole segments.
pub fn path_feasible(points: &[Point], scenario: &Scenario) -> bool {
    if points.len() < 2 {
        return false;
    }
    if !points.iter().all(|p| scenario.bounds.contains(p)) {
        return false;
    }
    points.windows(2).all(|pair| {
        let seg = Segment::new(pair[0].clone(), pair[1].clone());
        scenario
            .obstacles
            .iter()
            .all(|obstacle| segment_clears(&seg, obstacle, &scenario.sigma))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{self, Bounds};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn pt(x: i64, y: i64) -> Point {
        Point::new(rat(x, 1), rat(y, 1))
    }

    fn seg(ax: i64, ay: i64, bx: i64, by: i64) -> Segment {
        Segment::new(pt(ax, ay), pt(bx, by))
    }

    #[test]
    fn segment_point_endpoints_and_midpoint() {
        let s = seg(1, 1, 9, 9);
        assert_eq!(segment_point(&s, &rat(0, 1)).unwrap(), pt(1, 1));
        assert_eq!(segment_point(&s, &rat(1, 1)).unwrap(), pt(9, 9));
        assert_eq!(segment_point(&s, &rat(1, 2)).unwrap(), pt(5, 5));
        assert!(segment_point(&s, &rat(3, 2)).is_err());
        assert!(segment_point(&s, &rat(-1, 2)).is_err());
    }

    #[test]
    fn path_cost_examples() {
        // single diagonal: 8√2
        let diagonal = path_cost(&[pt(1, 1), pt(9, 9)]).unwrap();
        let expected = Cost::sqrt_rational(&rat(128, 1));
        assert_eq!(diagonal, expected);
        // collinear midpoint adds nothing
        let with_mid = path_cost(&[pt(1, 1), pt(5, 5), pt(9, 9)]).unwrap();
        assert_eq!(with_mid, expected);
        // 3-4-5 triangle
        assert_eq!(path_cost(&[pt(0, 0), pt(3, 4)]).unwrap(), Cost::from_integer(5));
        // fewer than 2 points is a domain error
        assert!(path_cost(&[pt(0, 0)]).is_err());
        assert!(path_cost(&[]).is_err());
    }

    #[test]
    fn path_cost_zero_iff_coincident() {
        assert!(path_cost(&[pt(3, 4), pt(3, 4), pt(3, 4)]).unwrap().is_zero());
        assert!(!path_cost(&[pt(3, 4), pt(3, 5)]).unwrap().is_zero());
    }

    #[test]
    fn clearance_examples() {
        // center on the segment
        assert_eq!(segment_clearance_sq(&seg(1, 1, 9, 9), &pt(5, 5)), rat(0, 1));
        // axis-aligned projection: foot (5,1), distance 4
        assert_eq!(segment_clearance_sq(&seg(1, 1, 9, 1), &pt(5, 5)), rat(16, 1));
        // nearest point is an endpoint
        assert_eq!(segment_clearance_sq(&seg(0, 0, 1, 0), &pt(5, 5)), rat(41, 1));
    }

    #[test]
    fn clears_examples() {
        let obstacle = Circle {
            center: pt(5, 5),
            radius: rat(5, 2),
        };
        let sigma = rat(1, 2);
        assert!(!segment_clears(&seg(1, 1, 9, 9), &obstacle, &sigma));
        assert!(segment_clears(&seg(1, 1, 9, 1), &obstacle, &sigma));
        // degenerate point-segment at distance 4√2 > 3
        assert!(segment_clears(&seg(1, 1, 1, 1), &obstacle, &sigma));
        // exact touch: distance 3 equals r+σ, and ≥ accepts it
        assert!(segment_clears(&seg(2, 5, 2, 5), &obstacle, &sigma));
    }

    #[test]
    fn feasibility_on_the_single_obstacle_scene() {
        let scenario = scenario::setting1();
        assert!(!path_feasible(&[pt(1, 1), pt(9, 9)], &scenario));
        assert!(path_feasible(&[pt(1, 1), pt(9, 1), pt(9, 9)], &scenario));
        assert!(!path_feasible(&[pt(1, 1), pt(11, 5), pt(9, 9)], &scenario));
        assert!(!path_feasible(&[pt(1, 1)], &scenario));
    }

    #[test]
    fn bounds_contains_is_inclusive() {
        let bounds = Bounds {
            x_min: rat(0, 1),
            x_max: rat(10, 1),
            y_min: rat(0, 1),
            y_max: rat(10, 1),
        };
        assert!(bounds.contains(&pt(0, 0)));
        assert!(bounds.contains(&pt(10, 10)));
        assert!(!bounds.contains(&pt(10, 11)));
    }

    prop_compose! {
        fn small_rational()(numer in -40i64..=40, denom in 1i64..=4) -> BigRational {
            rat(numer, denom)
        }
    }

    prop_compose! {
        fn arb_point()(x in small_rational(), y in small_rational()) -> Point {
            Point::new(x, y)
        }
    }

    proptest! {
        #[test]
        fn clearance_never_exceeds_endpoint_distances(a in arb_point(), b in arb_point(), c in arb_point()) {
            let s = Segment::new(a.clone(), b.clone());
            let clearance = segment_clearance_sq(&s, &c);
            prop_assert!(clearance <= distance_sq(&a, &c));
            prop_assert!(clearance <= distance_sq(&b, &c));
            // when the perpendicular foot falls outside the segment, the
            // nearest endpoint is exactly the answer
            let wx = &s.b.x - &s.a.x;
            let wy = &s.b.y - &s.a.y;
            let ux = &c.x - &s.a.x;
            let uy = &c.y - &s.a.y;
            let uw = &ux * &wx + &uy * &wy;
            let ww = &wx * &wx + &wy * &wy;
            if uw.is_negative() || uw > ww {
                let nearest = distance_sq(&a, &c).min(distance_sq(&b, &c));
                prop_assert_eq!(clearance, nearest);
            }
        }

        #[test]
        fn clearance_symmetric_in_endpoints(a in arb_point(), b in arb_point(), c in arb_point()) {
            let fwd = segment_clearance_sq(&Segment::new(a.clone(), b.clone()), &c);
            let rev = segment_clearance_sq(&Segment::new(b, a), &c);
            prop_assert_eq!(fwd, rev);
        }

        #[test]
        fn inserting_a_waypoint_never_shortens(a in arb_point(), b in arb_point(), w in arb_point()) {
            let direct = path_cost(&[a.clone(), b.clone()]).unwrap();
            let detour = path_cost(&[a, w, b]).unwrap();
            prop_assert!(detour >= direct);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn clearance_matches_sampled_minimum(a in arb_point(), b in arb_point(), c in arb_point()) {
            let s = Segment::new(a, b);
            let exact = segment_clearance_sq(&s, &c);
            let coarse = sampled_min(&s, &c, 100);
            let fine = sampled_min(&s, &c, 500);
            // sampling can only overshoot the true minimum, and refining the
            // sampling never moves it further away
            prop_assert!(coarse >= exact);
            prop_assert!(fine >= exact);
            prop_assert!(fine <= coarse);
        }
    }

    fn sampled_min(s: &Segment, c: &Point, steps: i64) -> BigRational {
        (0..=steps)
            .map(|i| {
                let p = segment_point(s, &rat(i, steps)).unwrap();
                distance_sq(&p, c)
            })
            .min()
            .unwrap()
    }
}
