//! Built-in exact decision procedure.
//!
//! Depth-first branch-and-bound over the integer grid: waypoints are placed
//! left to right, candidate cells are visited in lexicographic (x, y) order,
//! and a subtree is pruned when the cost of the partial path plus the
//! straight-line distance from the last placed waypoint to the target
//! already reaches the bound — an admissible estimate by the triangle
//! inequality, so pruning never removes a satisfying leaf. Segment
//! feasibility is checked as each waypoint is placed.
//!
//! The first satisfying leaf in this order is returned, which makes the
//! model the lexicographically smallest satisfying assignment; the whole
//! procedure is deterministic.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::RawOutcome;
use crate::cost::Cost;
use crate::encoder::OracleQuery;
use crate::geometry::{distance, segment_clears, Point, Segment};

const DEADLINE_CHECK_INTERVAL: u64 = 4096;

pub(crate) fn decide(query: &OracleQuery, deadline: Option<Instant>) -> RawOutcome {
    if let Some(deadline) = deadline {
        if Instant::now() >= deadline {
            return RawOutcome::Timeout;
        }
    }
    if query.domain.is_empty() {
        return RawOutcome::Unsat;
    }
    let mut ranges = Vec::with_capacity(query.domain.intervals.len());
    for (lo, hi) in &query.domain.intervals {
        match (lo.to_i64(), hi.to_i64()) {
            (Some(lo), Some(hi)) => ranges.push((lo, hi)),
            _ => {
                return RawOutcome::Error(
                    "domain interval exceeds the supported coordinate range".into(),
                )
            }
        }
    }

    let scenario = &query.scenario;
    let bound_f64 = query.cost_bound.to_f64();
    // Conservative slack for the float pre-filter: distances here carry at
    // most ~1e-14 relative error, so 1e-6 of the bound's scale is certain.
    let margin = 1e-6 * (1.0 + bound_f64.abs());
    let obstacles_f64 = scenario
        .obstacles
        .iter()
        .map(|o| {
            let (cx, cy) = o.center.to_f64();
            let inflated = (&o.radius + &scenario.sigma).to_f64().unwrap_or(f64::NAN);
            (cx, cy, inflated * inflated)
        })
        .collect();
    let mut search = Search {
        query,
        ranges,
        deadline,
        nodes: 0,
        assignment: Vec::with_capacity(2 * query.waypoint_count),
        scale: query.precision as f64,
        target_f64: scenario.target.to_f64(),
        bound_f64,
        margin,
        obstacles_f64,
    };
    let start = query.scenario.start.clone();
    let start_f64 = start.to_f64();
    match search.place(0, &start, start_f64, 0.0) {
        Ok(Some(assignment)) => RawOutcome::Sat(assignment),
        Ok(None) => RawOutcome::Unsat,
        Err(Expired) => RawOutcome::Timeout,
    }
}

struct Expired;

struct Search<'q> {
    query: &'q OracleQuery,
    ranges: Vec<(i64, i64)>,
    deadline: Option<Instant>,
    nodes: u64,
    assignment: Vec<BigInt>,
    scale: f64,
    target_f64: (f64, f64),
    bound_f64: f64,
    margin: f64,
    /// Per obstacle: center and squared inflated radius, for the clearance
    /// pre-filter.
    obstacles_f64: Vec<(f64, f64, f64)>,
}

impl Search<'_> {
    /// Places waypoint `level` and recurses.
    ///
    /// Interior pruning runs entirely in f64 with a conservative margin: a
    /// subtree is cut only when partial cost plus the straight-line
    /// remainder (admissible, by the triangle inequality) certainly reaches
    /// the bound. Exact arithmetic is reserved for the decisions that define
    /// the semantics: segment feasibility near an obstacle ring and the
    /// final cost comparison at a leaf. The lexicographically first
    /// satisfying assignment is therefore found exactly, in order.
    fn place(
        &mut self,
        level: usize,
        prev: &Point,
        prev_f64: (f64, f64),
        partial_f64: f64,
    ) -> Result<Option<Vec<BigInt>>, Expired> {
        let (x_lo, x_hi) = self.ranges[2 * level];
        let (y_lo, y_hi) = self.ranges[2 * level + 1];
        let last = level + 1 == self.query.waypoint_count;
        for x in x_lo..=x_hi {
            for y in y_lo..=y_hi {
                self.nodes += 1;
                if self.nodes.is_multiple_of(DEADLINE_CHECK_INTERVAL) {
                    if let Some(deadline) = self.deadline {
                        if Instant::now() >= deadline {
                            return Err(Expired);
                        }
                    }
                }
                let cand_f64 = (x as f64 / self.scale, y as f64 / self.scale);
                let reached_f64 = partial_f64 + dist_f64(prev_f64, cand_f64);
                let optimistic_f64 = reached_f64 + dist_f64(cand_f64, self.target_f64);
                if optimistic_f64 >= self.bound_f64 + self.margin {
                    continue;
                }
                // Exact points are built lazily: most candidates are decided
                // by the float filters alone.
                let mut candidate: Option<Point> = None;
                if !self.segment_ok(prev, prev_f64, (x, y), cand_f64, &mut candidate) {
                    continue;
                }
                if last {
                    // Clearance is symmetric in the endpoints, so the final
                    // leg is checked target→candidate to reuse the lazy slot.
                    let target = &self.query.scenario.target;
                    if !self.segment_ok(target, self.target_f64, (x, y), cand_f64, &mut candidate) {
                        continue;
                    }
                    self.assignment.push(BigInt::from(x));
                    self.assignment.push(BigInt::from(y));
                    if self.exact_total() < self.query.cost_bound {
                        return Ok(Some(self.assignment.clone()));
                    }
                    self.assignment.pop();
                    self.assignment.pop();
                } else {
                    let cand_point = candidate.unwrap_or_else(|| self.grid_point(x, y));
                    self.assignment.push(BigInt::from(x));
                    self.assignment.push(BigInt::from(y));
                    if let Some(found) = self.place(level + 1, &cand_point, cand_f64, reached_f64)? {
                        return Ok(Some(found));
                    }
                    self.assignment.pop();
                    self.assignment.pop();
                }
            }
        }
        Ok(None)
    }

    /// Exact cost of the fully placed assignment.
    fn exact_total(&self) -> Cost {
        let mut points = Vec::with_capacity(self.query.waypoint_count + 2);
        points.push(self.query.scenario.start.clone());
        for pair in self.assignment.chunks_exact(2) {
            let p = BigInt::from(self.query.precision);
            points.push(Point::new(
                BigRational::new(pair[0].clone(), p.clone()),
                BigRational::new(pair[1].clone(), p),
            ));
        }
        points.push(self.query.scenario.target.clone());
        let mut total = Cost::zero();
        for pair in points.windows(2) {
            total = &total + &distance(&pair[0], &pair[1]);
        }
        total
    }

    fn grid_point(&self, x: i64, y: i64) -> Point {
        let p = BigInt::from(self.query.precision);
        Point::new(
            BigRational::new(BigInt::from(x), p.clone()),
            BigRational::new(BigInt::from(y), p),
        )
    }

    /// Exact segment feasibility with a float pre-filter: clearances far
    /// from the inflated radius (in either direction) are decided in f64,
    /// with a margin many orders above the attainable rounding error; only
    /// the uncertainty band pays for rational arithmetic. The grid endpoint
    /// is materialized into `to_slot` only when an exact test is needed, or
    /// reused if a previous check already built it.
    fn segment_ok(
        &self,
        from: &Point,
        from_f64: (f64, f64),
        to_xy: (i64, i64),
        to_f64: (f64, f64),
        to_slot: &mut Option<Point>,
    ) -> bool {
        let scenario = &self.query.scenario;
        for (i, obstacle) in scenario.obstacles.iter().enumerate() {
            let (cx, cy, r_sq) = self.obstacles_f64[i];
            let (clear_sq, magnitude) = clearance_sq_f64(from_f64, to_f64, (cx, cy));
            let band = 1e-9 * (1.0 + magnitude + r_sq);
            if clear_sq > r_sq + band {
                continue; // certainly clears
            }
            if clear_sq < r_sq - band {
                return false; // certainly violates
            }
            let to_point = to_slot
                .get_or_insert_with(|| {
                    let p = BigInt::from(self.query.precision);
                    Point::new(
                        BigRational::new(BigInt::from(to_xy.0), p.clone()),
                        BigRational::new(BigInt::from(to_xy.1), p),
                    )
                })
                .clone();
            let seg = Segment::new(from.clone(), to_point);
            if !segment_clears(&seg, obstacle, &scenario.sigma) {
                return false;
            }
        }
        true
    }
}

fn dist_f64(a: (f64, f64), b: (f64, f64)) -> f64 {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    (dx * dx + dy * dy).sqrt()
}

/// Approximate squared clearance plus the magnitude of the quantities it
/// was computed from, which bounds the attainable rounding error.
fn clearance_sq_f64(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> (f64, f64) {
    let wx = b.0 - a.0;
    let wy = b.1 - a.1;
    let ux = c.0 - a.0;
    let uy = c.1 - a.1;
    let ww = wx * wx + wy * wy;
    let uu = ux * ux + uy * uy;
    let uw = ux * wx + uy * wy;
    let t = if ww > 0.0 { (uw / ww).clamp(0.0, 1.0) } else { 0.0 };
    let dx = ux - t * wx;
    let dy = uy - t * wy;
    (dx * dx + dy * dy, ww + uu)
}
