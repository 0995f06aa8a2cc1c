//! Environment model and scenario-file ingestion.
//!
//! A scenario is a rectangular environment, circular obstacles inflated by a
//! shared safety margin, and the start/target pair. Scenario files are JSON
//! documents with decimal literals; numbers are converted to exact rationals
//! on load and validated against the model invariants, naming the violated
//! invariant in the error.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use thiserror::Error;

use crate::decimal::{self, DecimalError};
use crate::geometry::{distance_sq, Circle, Point};

/// Axis-aligned environment rectangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub x_min: BigRational,
    pub x_max: BigRational,
    pub y_min: BigRational,
    pub y_max: BigRational,
}

impl Bounds {
    /// Inclusive containment: the boundary belongs to the environment.
    pub fn contains(&self, p: &Point) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    pub fn width(&self) -> BigRational {
        &self.x_max - &self.x_min
    }

    pub fn height(&self) -> BigRational {
        &self.y_max - &self.y_min
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub bounds: Bounds,
    pub obstacles: Vec<Circle>,
    pub sigma: BigRational,
    pub start: Point,
    pub target: Point,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("scenario parse error: {0}")]
    Parse(String),
    #[error("missing field `{0}`")]
    MissingField(String),
    #[error("field `{field}`: expected {expected}")]
    FieldType { field: String, expected: String },
    #[error("field `{field}`: {source}")]
    Number {
        field: String,
        source: DecimalError,
    },
    #[error("unsupported scenario format {0} (expected 1)")]
    UnsupportedFormat(String),
    #[error("invalid bounds: x_min < x_max and y_min < y_max required")]
    InvalidBounds,
    #[error("negative safety margin sigma")]
    NegativeSigma,
    #[error("obstacle {index}: non-positive radius")]
    NonPositiveRadius { index: usize },
    #[error("start outside bounds")]
    StartOutsideBounds,
    #[error("target outside bounds")]
    TargetOutsideBounds,
    #[error("start inside inflated obstacle {index}")]
    StartInsideInflatedObstacle { index: usize },
    #[error("target inside inflated obstacle {index}")]
    TargetInsideInflatedObstacle { index: usize },
    #[error("field `{0}`: value not representable as a decimal")]
    NotDecimal(String),
}

impl Scenario {
    /// Validating constructor; the only way to build a `Scenario`.
    pub fn new(
        bounds: Bounds,
        obstacles: Vec<Circle>,
        sigma: BigRational,
        start: Point,
        target: Point,
    ) -> Result<Self, ScenarioError> {
        if bounds.x_min >= bounds.x_max || bounds.y_min >= bounds.y_max {
            return Err(ScenarioError::InvalidBounds);
        }
        if sigma.is_negative() {
            return Err(ScenarioError::NegativeSigma);
        }
        for (index, obstacle) in obstacles.iter().enumerate() {
            if !obstacle.radius.is_positive() {
                return Err(ScenarioError::NonPositiveRadius { index });
            }
        }
        if !bounds.contains(&start) {
            return Err(ScenarioError::StartOutsideBounds);
        }
        if !bounds.contains(&target) {
            return Err(ScenarioError::TargetOutsideBounds);
        }
        // Strictly outside: touching the safety ring is not allowed for the
        // path endpoints, otherwise the first or last segment could never
        // leave the ring.
        for (index, obstacle) in obstacles.iter().enumerate() {
            let inflated = &obstacle.radius + &sigma;
            let inflated_sq = &inflated * &inflated;
            if distance_sq(&start, &obstacle.center) <= inflated_sq {
                return Err(ScenarioError::StartInsideInflatedObstacle { index });
            }
            if distance_sq(&target, &obstacle.center) <= inflated_sq {
                return Err(ScenarioError::TargetInsideInflatedObstacle { index });
            }
        }
        Ok(Self {
            bounds,
            obstacles,
            sigma,
            start,
            target,
        })
    }

}

const MAX_FRACTION_DIGITS: usize = 6;

/// Parses and validates a scenario file.
pub fn load_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))?;
    let root = value
        .as_object()
        .ok_or_else(|| ScenarioError::FieldType {
            field: "<root>".into(),
            expected: "object".into(),
        })?;

    let format = field(root, "format")?;
    let format_num = format
        .as_i64()
        .ok_or_else(|| ScenarioError::FieldType {
            field: "format".into(),
            expected: "integer".into(),
        })?;
    if format_num != 1 {
        return Err(ScenarioError::UnsupportedFormat(format_num.to_string()));
    }

    let bounds_raw = number_array(root, "bounds", 4)?;
    let bounds = Bounds {
        x_min: bounds_raw[0].clone(),
        x_max: bounds_raw[1].clone(),
        y_min: bounds_raw[2].clone(),
        y_max: bounds_raw[3].clone(),
    };
    let start_raw = number_array(root, "start", 2)?;
    let target_raw = number_array(root, "target", 2)?;
    let sigma = number_field(field(root, "sigma")?, "sigma")?;

    let obstacles_value = field(root, "obstacles")?;
    let obstacles_list = obstacles_value
        .as_array()
        .ok_or_else(|| ScenarioError::FieldType {
            field: "obstacles".into(),
            expected: "array".into(),
        })?;
    let mut obstacles = Vec::with_capacity(obstacles_list.len());
    for (i, entry) in obstacles_list.iter().enumerate() {
        let object = entry.as_object().ok_or_else(|| ScenarioError::FieldType {
            field: format!("obstacles[{i}]"),
            expected: "object".into(),
        })?;
        let center = number_array(object, &format!("obstacles[{i}].center"), 2)
            .or_else(|_| number_array_at(object, "center", &format!("obstacles[{i}].center"), 2))?;
        let radius = number_field(
            object
                .get("radius")
                .ok_or_else(|| ScenarioError::MissingField(format!("obstacles[{i}].radius")))?,
            &format!("obstacles[{i}].radius"),
        )?;
        obstacles.push(Circle {
            center: Point::new(center[0].clone(), center[1].clone()),
            radius,
        });
    }

    Scenario::new(
        bounds,
        obstacles,
        sigma,
        Point::new(start_raw[0].clone(), start_raw[1].clone()),
        Point::new(target_raw[0].clone(), target_raw[1].clone()),
    )
}

fn field<'a>(
    object: &'a serde_json::Map<String, serde_json::Value>,
    name: &str,
) -> Result<&'a serde_json::Value, ScenarioError> {
    object
        .get(name)
        .ok_or_else(|| ScenarioError::MissingField(name.into()))
}

fn number_array(
    object: &serde_json::Map<String, serde_json::Value>,
    name: &str,
    len: usize,
) -> Result<Vec<BigRational>, ScenarioError> {
    number_array_at(object, name, name, len)
}

fn number_array_at(
    object: &serde_json::Map<String, serde_json::Value>,
    key: &str,
    field_name: &str,
    len: usize,
) -> Result<Vec<BigRational>, ScenarioError> {
    let value = object
        .get(key)
        .ok_or_else(|| ScenarioError::MissingField(field_name.into()))?;
    let list = value.as_array().ok_or_else(|| ScenarioError::FieldType {
        field: field_name.into(),
        expected: format!("array of {len} numbers"),
    })?;
    if list.len() != len {
        return Err(ScenarioError::FieldType {
            field: field_name.into(),
            expected: format!("array of {len} numbers"),
        });
    }
    list.iter()
        .enumerate()
        .map(|(i, v)| number_field(v, &format!("{field_name}[{i}]")))
        .collect()
}

fn number_field(value: &serde_json::Value, field: &str) -> Result<BigRational, ScenarioError> {
    let number = value.as_number().ok_or_else(|| ScenarioError::FieldType {
        field: field.into(),
        expected: "number".into(),
    })?;
    // With arbitrary precision enabled the literal text survives parsing, so
    // the conversion below is exact.
    let literal = number.to_string();
    match decimal::fraction_digits(&literal) {
        Some(digits) if digits <= MAX_FRACTION_DIGITS => {}
        Some(digits) => {
            return Err(ScenarioError::Number {
                field: field.into(),
                source: DecimalError::TooManyFractionDigits {
                    literal,
                    got: digits,
                    max: MAX_FRACTION_DIGITS,
                },
            })
        }
        None => {
            return Err(ScenarioError::FieldType {
                field: field.into(),
                expected: "plain decimal literal (no exponent)".into(),
            })
        }
    }
    decimal::parse_decimal(&literal).map_err(|source| ScenarioError::Number {
        field: field.into(),
        source,
    })
}

/// Serializes a scenario back to the file grammar; `load_scenario` on the
/// result reconstructs an equal scenario.
pub fn emit_scenario(scenario: &Scenario) -> Result<String, ScenarioError> {
    let num = |value: &BigRational, field: &str| -> Result<String, ScenarioError> {
        decimal::format_exact(value).ok_or_else(|| ScenarioError::NotDecimal(field.into()))
    };
    let mut out = String::new();
    out.push_str("{\n  \"format\": 1,\n");
    out.push_str(&format!(
        "  \"bounds\": [{}, {}, {}, {}],\n",
        num(&scenario.bounds.x_min, "bounds")?,
        num(&scenario.bounds.x_max, "bounds")?,
        num(&scenario.bounds.y_min, "bounds")?,
        num(&scenario.bounds.y_max, "bounds")?
    ));
    out.push_str(&format!(
        "  \"start\": [{}, {}],\n",
        num(&scenario.start.x, "start")?,
        num(&scenario.start.y, "start")?
    ));
    out.push_str(&format!(
        "  \"target\": [{}, {}],\n",
        num(&scenario.target.x, "target")?,
        num(&scenario.target.y, "target")?
    ));
    out.push_str(&format!("  \"sigma\": {},\n", num(&scenario.sigma, "sigma")?));
    out.push_str("  \"obstacles\": [");
    for (i, obstacle) in scenario.obstacles.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!(
            "\n    {{\"center\": [{}, {}], \"radius\": {}}}",
            num(&obstacle.center.x, "center")?,
            num(&obstacle.center.y, "center")?,
            num(&obstacle.radius, "radius")?
        ));
    }
    if !scenario.obstacles.is_empty() {
        out.push_str("\n  ");
    }
    out.push_str("]\n}\n");
    Ok(out)
}

/// Grid-resolved waypoints: integer coordinates are real meters × precision.
/// Start and target come from the scenario, not the grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPath {
    pub precision: u64,
    pub waypoints: Vec<(BigInt, BigInt)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridPathError {
    #[error("precision {0} is not a power of ten")]
    PrecisionNotPowerOfTen(u64),
    #[error("a grid path needs at least one waypoint")]
    NoWaypoints,
}

pub fn is_power_of_ten(p: u64) -> bool {
    let mut v = 1u64;
    loop {
        if v == p {
            return true;
        }
        match v.checked_mul(10) {
            Some(next) => v = next,
            None => return false,
        }
    }
}

impl GridPath {
    pub fn new(precision: u64, waypoints: Vec<(BigInt, BigInt)>) -> Result<Self, GridPathError> {
        if !is_power_of_ten(precision) {
            return Err(GridPathError::PrecisionNotPowerOfTen(precision));
        }
        if waypoints.is_empty() {
            return Err(GridPathError::NoWaypoints);
        }
        Ok(Self {
            precision,
            waypoints,
        })
    }

    /// Same real-valued path one decimal place finer: coordinates and
    /// precision both scale by ten.
    pub fn rescaled_tenfold(&self) -> Self {
        Self {
            precision: self.precision * 10,
            waypoints: self
                .waypoints
                .iter()
                .map(|(x, y)| (x * 10, y * 10))
                .collect(),
        }
    }

    /// Real coordinates of one waypoint (exact division by the precision).
    pub fn waypoint_point(&self, index: usize) -> Point {
        let (x, y) = &self.waypoints[index];
        let p = BigInt::from(self.precision);
        Point::new(
            BigRational::new(x.clone(), p.clone()),
            BigRational::new(y.clone(), p),
        )
    }
}

/// [S, w₁/p, …, w_m/p, T] as exact real points.
pub fn grid_path_to_real(grid_path: &GridPath, scenario: &Scenario) -> Vec<Point> {
    let mut points = Vec::with_capacity(grid_path.waypoints.len() + 2);
    points.push(scenario.start.clone());
    for i in 0..grid_path.waypoints.len() {
        points.push(grid_path.waypoint_point(i));
    }
    points.push(scenario.target.clone());
    points
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Single obstacle of radius 2.5 centered at (5,5) in a 10×10 box,
/// start (1,1), target (9,9), safety margin 0.5.
pub fn setting1() -> Scenario {
    Scenario::new(
        Bounds {
            x_min: rat(0, 1),
            x_max: rat(10, 1),
            y_min: rat(0, 1),
            y_max: rat(10, 1),
        },
        vec![Circle {
            center: Point::new(rat(5, 1), rat(5, 1)),
            radius: rat(5, 2),
        }],
        rat(1, 2),
        Point::new(rat(1, 1), rat(1, 1)),
        Point::new(rat(9, 1), rat(9, 1)),
    )
    .expect("built-in scenario is valid")
}

/// Two obstacles: radius 1 at (2,4) and radius 1.5 at (7,8); same box,
/// endpoints and margin as `setting1`.
pub fn setting2() -> Scenario {
    Scenario::new(
        Bounds {
            x_min: rat(0, 1),
            x_max: rat(10, 1),
            y_min: rat(0, 1),
            y_max: rat(10, 1),
        },
        vec![
            Circle {
                center: Point::new(rat(2, 1), rat(4, 1)),
                radius: rat(1, 1),
            },
            Circle {
                center: Point::new(rat(7, 1), rat(8, 1)),
                radius: rat(3, 2),
            },
        ],
        rat(1, 2),
        Point::new(rat(1, 1), rat(1, 1)),
        Point::new(rat(9, 1), rat(9, 1)),
    )
    .expect("built-in scenario is valid")
}

/// Resolves a built-in scenario name.
pub fn by_name(name: &str) -> Option<Scenario> {
    match name {
        "setting1" => Some(setting1()),
        "setting2" => Some(setting2()),
        _ => None,
    }
}
