//! Convergence traces and their CSV form.
//!
//! One record per oracle call. The CSV layout is fixed:
//! `iteration,precision,waypoints,j_c,verdict,elapsed_s` with six decimal
//! places for the bound and three for elapsed time, so regenerating a trace
//! from the same inputs reproduces the same bytes.

use std::time::Duration;

use thiserror::Error;

use crate::cost::Cost;
use crate::geometry::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceVerdict {
    Sat,
    Unsat,
    Timeout,
}

impl TraceVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            TraceVerdict::Sat => "sat",
            TraceVerdict::Unsat => "unsat",
            TraceVerdict::Timeout => "timeout",
        }
    }
}

#[derive(Debug, Clone)]
pub struct TraceRecord {
    /// 1-based oracle call number.
    pub iteration: u64,
    pub precision: u64,
    pub waypoints: usize,
    /// The bound J_c the oracle was asked to beat.
    pub bound: Cost,
    pub verdict: TraceVerdict,
    pub elapsed: Duration,
    /// Real coordinates of the accepted counterexample, on SAT records.
    pub path: Option<Vec<Point>>,
}

#[derive(Debug, Clone, Default)]
pub struct ConvergenceTrace {
    records: Vec<TraceRecord>,
}

impl ConvergenceTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: TraceRecord) {
        debug_assert!(
            record.verdict != TraceVerdict::Sat
                || self
                    .sat_records()
                    .last()
                    .is_none_or(|prev| record.bound < prev.bound),
            "SAT bounds must strictly decrease"
        );
        self.records.push(record);
    }

    pub fn records(&self) -> &[TraceRecord] {
        &self.records
    }

    pub fn sat_records(&self) -> Vec<&TraceRecord> {
        self.records
            .iter()
            .filter(|r| r.verdict == TraceVerdict::Sat)
            .collect()
    }

    pub fn count(&self, verdict: TraceVerdict) -> usize {
        self.records.iter().filter(|r| r.verdict == verdict).count()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Copy with all elapsed times zeroed, for byte-reproducible artifacts.
    pub fn without_timing(&self) -> Self {
        Self {
            records: self
                .records
                .iter()
                .map(|r| TraceRecord {
                    elapsed: Duration::ZERO,
                    ..r.clone()
                })
                .collect(),
        }
    }
}

/// Renders the fixed-format CSV: header plus one row per oracle call.
pub fn emit_trace_csv(trace: &ConvergenceTrace) -> String {
    let mut out = String::from("iteration,precision,waypoints,j_c,verdict,elapsed_s\n");
    for record in trace.records() {
        out.push_str(&format!(
            "{},{},{},{:.6},{},{:.3}\n",
            record.iteration,
            record.precision,
            record.waypoints,
            record.bound.to_f64(),
            record.verdict.as_str(),
            record.elapsed.as_secs_f64(),
        ));
    }
    out
}

/// One parsed CSV row; the numeric fields reproduce the emitted formatting
/// exactly when re-rendered.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub iteration: u64,
    pub precision: u64,
    pub waypoints: usize,
    pub j_c: f64,
    pub verdict: TraceVerdict,
    pub elapsed_s: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceCsvError {
    #[error("line {line}: expected 6 fields, got {got}")]
    FieldCount { line: usize, got: usize },
    #[error("line {line}: bad {field}: `{value}`")]
    BadField {
        line: usize,
        field: &'static str,
        value: String,
    },
    #[error("missing or wrong header")]
    Header,
}

/// Parses CSV emitted by [`emit_trace_csv`].
pub fn parse_trace_csv(text: &str) -> Result<Vec<CsvRow>, TraceCsvError> {
    let mut lines = text.lines();
    if lines.next() != Some("iteration,precision,waypoints,j_c,verdict,elapsed_s") {
        return Err(TraceCsvError::Header);
    }
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(TraceCsvError::FieldCount {
                line: line_no,
                got: fields.len(),
            });
        }
        let bad = |field: &'static str, value: &str| TraceCsvError::BadField {
            line: line_no,
            field,
            value: value.to_string(),
        };
        let verdict = match fields[4] {
            "sat" => TraceVerdict::Sat,
            "unsat" => TraceVerdict::Unsat,
            "timeout" => TraceVerdict::Timeout,
            other => return Err(bad("verdict", other)),
        };
        rows.push(CsvRow {
            iteration: fields[0].parse().map_err(|_| bad("iteration", fields[0]))?,
            precision: fields[1].parse().map_err(|_| bad("precision", fields[1]))?,
            waypoints: fields[2].parse().map_err(|_| bad("waypoints", fields[2]))?,
            j_c: fields[3].parse().map_err(|_| bad("j_c", fields[3]))?,
            verdict,
            elapsed_s: fields[5].parse().map_err(|_| bad("elapsed_s", fields[5]))?,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn record(iteration: u64, bound_hundredths: i64, verdict: TraceVerdict) -> TraceRecord {
        TraceRecord {
            iteration,
            precision: 1,
            waypoints: 1,
            bound: Cost::from_rational(BigRational::new(bound_hundredths.into(), 100.into())),
            verdict,
            elapsed: Duration::from_millis(12),
            path: None,
        }
    }

    #[test]
    fn empty_trace_is_header_only() {
        let trace = ConvergenceTrace::new();
        assert_eq!(
            emit_trace_csv(&trace),
            "iteration,precision,waypoints,j_c,verdict,elapsed_s\n"
        );
    }

    #[test]
    fn three_records_make_four_lines() {
        let mut trace = ConvergenceTrace::new();
        trace.push(record(1, 4000, TraceVerdict::Sat));
        trace.push(record(2, 2500, TraceVerdict::Sat));
        trace.push(record(3, 1500, TraceVerdict::Unsat));
        let csv = emit_trace_csv(&trace);
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.contains("1,1,1,40.000000,sat,0.012"));
    }

    #[test]
    fn sat_rows_have_strictly_decreasing_bounds() {
        let mut trace = ConvergenceTrace::new();
        trace.push(record(1, 4000, TraceVerdict::Sat));
        trace.push(record(2, 2500, TraceVerdict::Sat));
        trace.push(record(3, 1400, TraceVerdict::Sat));
        let csv = emit_trace_csv(&trace);
        let rows = parse_trace_csv(&csv).unwrap();
        let sat_bounds: Vec<f64> = rows
            .iter()
            .filter(|r| r.verdict == TraceVerdict::Sat)
            .map(|r| r.j_c)
            .collect();
        assert!(sat_bounds.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let mut trace = ConvergenceTrace::new();
        trace.push(record(1, 4000, TraceVerdict::Sat));
        trace.push(record(2, 1999, TraceVerdict::Unsat));
        trace.push(record(3, 1998, TraceVerdict::Timeout));
        let csv = emit_trace_csv(&trace);
        let rows = parse_trace_csv(&csv).unwrap();
        assert_eq!(rows.len(), 3);
        // re-render the parsed rows: identical bytes
        let mut rebuilt = String::from("iteration,precision,waypoints,j_c,verdict,elapsed_s\n");
        for row in &rows {
            rebuilt.push_str(&format!(
                "{},{},{},{:.6},{},{:.3}\n",
                row.iteration, row.precision, row.waypoints, row.j_c,
                row.verdict.as_str(), row.elapsed_s
            ));
        }
        assert_eq!(rebuilt, csv);
    }

    #[test]
    fn parser_rejects_malformed_input() {
        assert_eq!(parse_trace_csv("nope\n"), Err(TraceCsvError::Header));
        let bad_fields = "iteration,precision,waypoints,j_c,verdict,elapsed_s\n1,2,3\n";
        assert!(matches!(
            parse_trace_csv(bad_fields),
            Err(TraceCsvError::FieldCount { line: 2, got: 3 })
        ));
        let bad_verdict = "iteration,precision,waypoints,j_c,verdict,elapsed_s\n1,1,1,2.0,maybe,0.1\n";
        assert!(matches!(
            parse_trace_csv(bad_verdict),
            Err(TraceCsvError::BadField { field: "verdict", .. })
        ));
    }

    #[test]
    fn timing_can_be_stripped() {
        let mut trace = ConvergenceTrace::new();
        trace.push(record(1, 4000, TraceVerdict::Sat));
        let stripped = trace.without_timing();
        assert_eq!(stripped.records()[0].elapsed, Duration::ZERO);
        assert!(emit_trace_csv(&stripped).contains(",0.000\n"));
    }
}
