//! Constraint-system encoding.
//!
//! `encode` turns (scenario, precision, waypoint count, domain box, cost
//! bound) into a backend-neutral query asserting "a feasible path cheaper
//! than the bound exists". A SAT answer is a counterexample to optimality of
//! the bound; UNSAT certifies the bound at this grid.
//!
//! Obstacle clearance is expressed per (segment, obstacle) pair in a
//! division-free polynomial form over the integer waypoint variables: with
//! w = B−A, u = C−A and inflated radius R (all in grid-scaled units),
//!
//! - endpoint checks: u·u ≥ R² and (u−w)·(u−w) ≥ R²,
//! - interior check, guarded by 0 ≤ u·w ≤ w·w:
//!   u·u·(w·w) − (u·w)² ≥ R²·(w·w).
//!
//! Rational constants (scaled endpoints, inflated radii) are cleared by
//! multiplying each constraint through by the least common denominator, so
//! every emitted coefficient is an integer. Path cost is not polynomial in
//! the variables; backends handle it through auxiliary distance symbols
//! (SMT-LIB) or by exact recomputation (builtin).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cost::Cost;
use crate::geometry::Point;
use crate::scenario::{is_power_of_ten, GridPath, Scenario};

/// Per-variable integer intervals for the 2m waypoint coordinates, ordered
/// x₀, y₀, x₁, y₁, … An interval with lo > hi is empty and makes any query
/// over it UNSAT.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainBox {
    pub intervals: Vec<(BigInt, BigInt)>,
}

impl DomainBox {
    /// The whole environment at precision p, for m waypoints.
    pub fn full(scenario: &Scenario, precision: u64, waypoints: usize) -> Self {
        let p = BigRational::from_integer(BigInt::from(precision));
        let x_lo = (&scenario.bounds.x_min * &p).ceil().to_integer();
        let x_hi = (&scenario.bounds.x_max * &p).floor().to_integer();
        let y_lo = (&scenario.bounds.y_min * &p).ceil().to_integer();
        let y_hi = (&scenario.bounds.y_max * &p).floor().to_integer();
        let mut intervals = Vec::with_capacity(2 * waypoints);
        for _ in 0..waypoints {
            intervals.push((x_lo.clone(), x_hi.clone()));
            intervals.push((y_lo.clone(), y_hi.clone()));
        }
        Self { intervals }
    }

    /// A box of ±radius grid units around the given waypoint coordinates,
    /// clipped to the environment.
    pub fn contracted(
        centers: &[(BigInt, BigInt)],
        radius: u64,
        scenario: &Scenario,
        precision: u64,
    ) -> Self {
        let full = Self::full(scenario, precision, centers.len());
        let r = BigInt::from(radius);
        let mut intervals = Vec::with_capacity(2 * centers.len());
        for (i, (x, y)) in centers.iter().enumerate() {
            let (x_lo, x_hi) = &full.intervals[2 * i];
            let (y_lo, y_hi) = &full.intervals[2 * i + 1];
            intervals.push(((x - &r).max(x_lo.clone()), (x + &r).min(x_hi.clone())));
            intervals.push(((y - &r).max(y_lo.clone()), (y + &r).min(y_hi.clone())));
        }
        Self { intervals }
    }

    pub fn waypoints(&self) -> usize {
        self.intervals.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.iter().any(|(lo, hi)| lo > hi)
    }

    pub fn contains(&self, assignment: &[BigInt]) -> bool {
        assignment.len() == self.intervals.len()
            && assignment
                .iter()
                .zip(&self.intervals)
                .all(|(v, (lo, hi))| v >= lo && v <= hi)
    }
}

/// A monomial is a sorted (variable, exponent) list; the empty list is the
/// constant monomial.
pub type Monomial = Vec<(usize, u32)>;

/// Multivariate polynomial over the query variables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn constant(value: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Vec::new(), value);
        }
        Self { terms }
    }

    pub fn var(index: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![(index, 1)], BigRational::one());
        Self { terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (mono, coeff) in &other.terms {
            let entry = terms.entry(mono.clone()).or_insert_with(BigRational::zero);
            *entry += coeff;
        }
        Self { terms }.normalized()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mono = merge_monomials(ma, mb);
                let entry = terms.entry(mono).or_insert_with(BigRational::zero);
                *entry += ca * cb;
            }
        }
        Self { terms }.normalized()
    }

    fn normalized(mut self) -> Self {
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    /// Multiplies through by the LCM of all coefficient denominators,
    /// producing an equivalent (for sign purposes) integer polynomial.
    pub fn cleared(&self) -> Self {
        let mut lcm = BigInt::one();
        for coeff in self.terms.values() {
            lcm = lcm.lcm(coeff.denom());
        }
        let factor = BigRational::from_integer(lcm);
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * &factor))
                .collect(),
        }
    }

    pub fn is_integer(&self) -> bool {
        self.terms.values().all(|c| c.denom().is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn eval(&self, assignment: &[BigInt]) -> BigRational {
        let mut total = BigRational::zero();
        for (mono, coeff) in &self.terms {
            let mut value = coeff.clone();
            for (var, exp) in mono {
                let v = BigRational::from_integer(assignment[*var].clone());
                for _ in 0..*exp {
                    value *= &v;
                }
            }
            total += value;
        }
        total
    }
}

fn merge_monomials(a: &Monomial, b: &Monomial) -> Monomial {
    let mut map: BTreeMap<usize, u32> = BTreeMap::new();
    for (v, e) in a.iter().chain(b.iter()) {
        *map.entry(*v).or_insert(0) += e;
    }
    map.into_iter().collect()
}

/// One end of a path segment: a fixed scaled point (start/target) or a
/// waypoint variable pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SegmentEnd {
    Fixed { x: BigRational, y: BigRational },
    Waypoint(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuerySegment {
    pub from: SegmentEnd,
    pub to: SegmentEnd,
}

/// Clearance of one segment from one inflated obstacle, as integer
/// polynomial atoms (each meaning poly ≥ 0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClearanceConstraint {
    pub segment_index: usize,
    pub obstacle_index: usize,
    pub endpoint_from: Poly,
    pub endpoint_to: Poly,
    /// Conjunction guarding the interior check: 0 ≤ u·w and u·w ≤ w·w.
    pub guard: [Poly; 2],
    pub interior: Poly,
}

impl ClearanceConstraint {
    pub fn satisfied(&self, assignment: &[BigInt]) -> bool {
        let ge0 = |poly: &Poly| !poly.eval(assignment).is_negative();
        if !ge0(&self.endpoint_from) || !ge0(&self.endpoint_to) {
            return false;
        }
        if self.guard.iter().all(ge0) {
            return ge0(&self.interior);
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleQuery {
    pub scenario: Scenario,
    pub precision: u64,
    pub waypoint_count: usize,
    pub domain: DomainBox,
    /// Bound in meters; the query asks for a path with cost strictly below.
    pub cost_bound: Cost,
    /// The m+1 segments S–w₀, w₀–w₁, …, w_{m−1}–T.
    pub segments: Vec<QuerySegment>,
    pub clearance: Vec<ClearanceConstraint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("cost bound must be positive")]
    NonPositiveBound,
    #[error("precision {0} is not a power of ten")]
    BadPrecision(u64),
    #[error("domain box has {got} intervals, expected {expected}")]
    BoxSizeMismatch { got: usize, expected: usize },
    #[error("domain box variable {variable} exceeds the environment")]
    BoxOutsideEnvironment { variable: usize },
    #[error("waypoint count must be at least 1")]
    NoWaypoints,
}

/// Builds the query "∃ waypoints in the box: every segment clears every
/// inflated obstacle and the path cost is < bound".
pub fn encode(
    scenario: &Scenario,
    precision: u64,
    waypoints: usize,
    domain: &DomainBox,
    cost_bound: &Cost,
) -> Result<OracleQuery, EncodeError> {
    if !is_power_of_ten(precision) {
        return Err(EncodeError::BadPrecision(precision));
    }
    if waypoints == 0 {
        return Err(EncodeError::NoWaypoints);
    }
    if cost_bound.sign() != std::cmp::Ordering::Greater {
        return Err(EncodeError::NonPositiveBound);
    }
    if domain.intervals.len() != 2 * waypoints {
        return Err(EncodeError::BoxSizeMismatch {
            got: domain.intervals.len(),
            expected: 2 * waypoints,
        });
    }
    let envelope = DomainBox::full(scenario, precision, waypoints);
    for (i, ((lo, hi), (env_lo, env_hi))) in domain
        .intervals
        .iter()
        .zip(&envelope.intervals)
        .enumerate()
    {
        // Empty intervals are fine (the query is then UNSAT); intervals
        // reaching outside the environment are a caller bug.
        if lo <= hi && (lo < env_lo || hi > env_hi) {
            return Err(EncodeError::BoxOutsideEnvironment { variable: i });
        }
    }

    let p = BigRational::from_integer(BigInt::from(precision));
    let scaled = |point: &Point| SegmentEnd::Fixed {
        x: &point.x * &p,
        y: &point.y * &p,
    };
    let mut segments = Vec::with_capacity(waypoints + 1);
    segments.push(QuerySegment {
        from: scaled(&scenario.start),
        to: SegmentEnd::Waypoint(0),
    });
    for i in 1..waypoints {
        segments.push(QuerySegment {
            from: SegmentEnd::Waypoint(i - 1),
            to: SegmentEnd::Waypoint(i),
        });
    }
    segments.push(QuerySegment {
        from: SegmentEnd::Waypoint(waypoints - 1),
        to: scaled(&scenario.target),
    });

    let mut clearance = Vec::with_capacity(segments.len() * scenario.obstacles.len());
    for (segment_index, segment) in segments.iter().enumerate() {
        for (obstacle_index, obstacle) in scenario.obstacles.iter().enumerate() {
            clearance.push(clearance_constraint(
                segment,
                segment_index,
                obstacle_index,
                &(&obstacle.center.x * &p),
                &(&obstacle.center.y * &p),
                &((&obstacle.radius + &scenario.sigma) * &p),
            ));
        }
    }

    Ok(OracleQuery {
        scenario: scenario.clone(),
        precision,
        waypoint_count: waypoints,
        domain: domain.clone(),
        cost_bound: cost_bound.clone(),
        segments,
        clearance,
    })
}

fn end_exprs(end: &SegmentEnd) -> (Poly, Poly) {
    match end {
        SegmentEnd::Fixed { x, y } => (Poly::constant(x.clone()), Poly::constant(y.clone())),
        SegmentEnd::Waypoint(i) => (Poly::var(2 * i), Poly::var(2 * i + 1)),
    }
}

fn clearance_constraint(
    segment: &QuerySegment,
    segment_index: usize,
    obstacle_index: usize,
    center_x: &BigRational,
    center_y: &BigRational,
    inflated_radius: &BigRational,
) -> ClearanceConstraint {
    let (ax, ay) = end_exprs(&segment.from);
    let (bx, by) = end_exprs(&segment.to);
    let cx = Poly::constant(center_x.clone());
    let cy = Poly::constant(center_y.clone());
    let r_sq = Poly::constant(inflated_radius * inflated_radius);

    let ux = cx.sub(&ax);
    let uy = cy.sub(&ay);
    let wx = bx.sub(&ax);
    let wy = by.sub(&ay);

    let uu = ux.mul(&ux).add(&uy.mul(&uy));
    let ww = wx.mul(&wx).add(&wy.mul(&wy));
    let uw = ux.mul(&wx).add(&uy.mul(&wy));

    let vx = ux.sub(&wx);
    let vy = uy.sub(&wy);
    let vv = vx.mul(&vx).add(&vy.mul(&vy));

    ClearanceConstraint {
        segment_index,
        obstacle_index,
        endpoint_from: uu.sub(&r_sq).cleared(),
        endpoint_to: vv.sub(&r_sq).cleared(),
        guard: [uw.cleared(), ww.sub(&uw).cleared()],
        interior: uu.mul(&ww).sub(&uw.mul(&uw)).sub(&r_sq.mul(&ww)).cleared(),
    }
}

impl OracleQuery {
    /// Interprets a variable assignment as a grid path.
    pub fn decode(&self, assignment: &[BigInt]) -> GridPath {
        let waypoints = assignment
            .chunks_exact(2)
            .map(|pair| (pair[0].clone(), pair[1].clone()))
            .collect();
        GridPath {
            precision: self.precision,
            waypoints,
        }
    }

    /// Full query semantics through the polynomial route: box membership,
    /// every clearance constraint, and exact path cost below the bound.
    pub fn satisfied_by(&self, assignment: &[BigInt]) -> bool {
        if !self.domain.contains(assignment) {
            return false;
        }
        if !self.clearance.iter().all(|c| c.satisfied(assignment)) {
            return false;
        }
        let points =
            crate::scenario::grid_path_to_real(&self.decode(assignment), &self.scenario);
        match crate::geometry::path_cost(&points) {
            Ok(cost) => cost < self.cost_bound,
            Err(_) => false,
        }
    }
}
