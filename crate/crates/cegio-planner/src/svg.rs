//! Static SVG rendering of an environment and a path.
//!
//! Output is plain SVG text built with fixed number formatting, so the same
//! scenario and path always produce the same bytes. Meters map to user units
//! at a configurable scale with the y axis flipped (SVG y grows downward).

use num_rational::BigRational;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::geometry::{path_feasible, Point};
use crate::scenario::Scenario;

#[derive(Debug, Clone, PartialEq)]
pub struct SvgOptions {
    /// User units per meter.
    pub scale: f64,
    /// Blank border around the environment rectangle, in user units.
    pub margin: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            scale: 60.0,
            margin: 20.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SvgError {
    #[error("path violates the feasibility precondition (vertex outside the box or segment through an obstacle)")]
    InfeasiblePath,
    #[error("path needs at least 2 points")]
    TooFewPoints,
}

/// Renders the environment rectangle, obstacles (filled, with dashed r+σ
/// safety rings), start/target markers, and the path polyline.
pub fn emit_svg(
    scenario: &Scenario,
    path: &[Point],
    options: &SvgOptions,
) -> Result<String, SvgError> {
    if path.len() < 2 {
        return Err(SvgError::TooFewPoints);
    }
    if !path_feasible(path, scenario) {
        return Err(SvgError::InfeasiblePath);
    }

    let scale = options.scale;
    let margin = options.margin;
    let to_f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
    let width = to_f(&scenario.bounds.width()) * scale + 2.0 * margin;
    let height = to_f(&scenario.bounds.height()) * scale + 2.0 * margin;
    let x = |v: &BigRational| (to_f(v) - to_f(&scenario.bounds.x_min)) * scale + margin;
    let y = |v: &BigRational| (to_f(&scenario.bounds.y_max) - to_f(v)) * scale + margin;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {} {}\">\n",
        fmt(width),
        fmt(height)
    ));
    out.push_str(&format!(
        "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#fcfcfc\" stroke=\"#333333\" stroke-width=\"2\"/>\n",
        fmt(margin),
        fmt(margin),
        fmt(width - 2.0 * margin),
        fmt(height - 2.0 * margin)
    ));

    for obstacle in &scenario.obstacles {
        let cx = x(&obstacle.center.x);
        let cy = y(&obstacle.center.y);
        let r = to_f(&obstacle.radius) * scale;
        let ring = to_f(&(&obstacle.radius + &scenario.sigma)) * scale;
        out.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#c8c8c8\" stroke=\"#555555\" stroke-width=\"1.5\"/>\n",
            fmt(cx),
            fmt(cy),
            fmt(r)
        ));
        out.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"#777777\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n",
            fmt(cx),
            fmt(cy),
            fmt(ring)
        ));
    }

    let points: Vec<String> = path
        .iter()
        .map(|p| format!("{},{}", fmt(x(&p.x)), fmt(y(&p.y))))
        .collect();
    out.push_str(&format!(
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"#1f6fde\" stroke-width=\"3\"/>\n",
        points.join(" ")
    ));
    for p in path {
        out.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"#1f6fde\"/>\n",
            fmt(x(&p.x)),
            fmt(y(&p.y))
        ));
    }

    marker(&mut out, x(&scenario.start.x), y(&scenario.start.y), "#0c8a3e", "S");
    marker(&mut out, x(&scenario.target.x), y(&scenario.target.y), "#c22f2f", "T");
    out.push_str("</svg>\n");
    Ok(out)
}

fn marker(out: &mut String, cx: f64, cy: f64, color: &str, label: &str) {
    out.push_str(&format!(
        "  <circle cx=\"{}\" cy=\"{}\" r=\"7\" fill=\"{color}\"/>\n",
        fmt(cx),
        fmt(cy)
    ));
    out.push_str(&format!(
        "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"16\" fill=\"#000000\">{label}</text>\n",
        fmt(cx + 10.0),
        fmt(cy - 10.0)
    ));
}

fn fmt(value: f64) -> String {
    format!("{value:.2}")
}
