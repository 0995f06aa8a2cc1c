//! Helpers shared by the integration suites: independent oracles (full
//! enumeration, no pruning), a deterministic RNG, and a small XML
//! well-formedness check. These deliberately avoid the library's search
//! code paths so they can serve as cross-checks against it.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;

use cegio_planner::cost::Cost;
use cegio_planner::encoder::OracleQuery;
use cegio_planner::geometry::{path_cost, path_feasible, Point};
use cegio_planner::scenario::Scenario;

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn grid_point(x: i64, y: i64) -> Point {
    Point::new(rat(x, 1), rat(y, 1))
}

/// Cheapest feasible single-waypoint grid path at p=1 over the 11×11 grid,
/// by brute force: filter with the exact feasibility predicate, take the
/// minimum exact cost.
pub fn enumerate_single_waypoint_optimum(scenario: &Scenario) -> Option<Cost> {
    let mut best: Option<Cost> = None;
    for x in 0..=10 {
        for y in 0..=10 {
            let points = vec![
                scenario.start.clone(),
                grid_point(x, y),
                scenario.target.clone(),
            ];
            if path_feasible(&points, scenario) {
                let cost = path_cost(&points).unwrap();
                if best.as_ref().is_none_or(|b| cost < *b) {
                    best = Some(cost);
                }
            }
        }
    }
    best
}

/// Unpruned reference decision for m=1 queries: scan the whole box in
/// lexicographic order, return the first satisfying assignment.
pub fn naive_decide(query: &OracleQuery) -> Option<Vec<BigInt>> {
    use num_traits::ToPrimitive;
    assert_eq!(query.waypoint_count, 1);
    let (x_lo, x_hi) = (
        query.domain.intervals[0].0.to_i64().unwrap(),
        query.domain.intervals[0].1.to_i64().unwrap(),
    );
    let (y_lo, y_hi) = (
        query.domain.intervals[1].0.to_i64().unwrap(),
        query.domain.intervals[1].1.to_i64().unwrap(),
    );
    for x in x_lo..=x_hi {
        for y in y_lo..=y_hi {
            let assignment = vec![BigInt::from(x), BigInt::from(y)];
            if query.satisfied_by(&assignment) {
                return Some(assignment);
            }
        }
    }
    None
}

/// Splitmix-style deterministic generator for reproducible "random" queries.
pub struct Lcg(u64);

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Self(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut z = self.0;
        z = (z ^ (z >> 33)).wrapping_mul(0xff51afd7ed558ccd);
        z ^ (z >> 33)
    }

    /// Uniform integer in [lo, hi].
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi - lo + 1) as u64;
        lo + (self.next_u64() % span) as i64
    }
}

/// Minimal XML well-formedness check: every opened tag closes in order,
/// attributes are quoted, exactly one root element.
pub fn xml_well_formed(text: &str) -> bool {
    let mut stack: Vec<String> = Vec::new();
    let mut roots = 0usize;
    let mut rest = text.trim();
    while let Some(open) = rest.find('<') {
        let Some(close) = rest[open..].find('>') else {
            return false;
        };
        let tag = &rest[open + 1..open + close];
        rest = &rest[open + close + 1..];
        if tag.starts_with('?') || tag.starts_with('!') {
            continue;
        }
        if let Some(name) = tag.strip_prefix('/') {
            match stack.pop() {
                Some(expected) if expected == name.trim() => {}
                _ => return false,
            }
            if stack.is_empty() {
                roots += 1;
            }
        } else if tag.ends_with('/') {
            if stack.is_empty() {
                roots += 1;
            }
        } else {
            let name: String = tag.split_whitespace().next().unwrap_or("").to_string();
            if name.is_empty() {
                return false;
            }
            // quoted-attribute sanity: even number of double quotes
            if !tag.matches('"').count().is_multiple_of(2) {
                return false;
            }
            stack.push(name);
        }
    }
    stack.is_empty() && roots == 1
}
