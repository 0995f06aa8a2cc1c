//! SMT-LIB 2 backend: script emission, solve-process driving, and model
//! parsing.
//!
//! One stateless solver process per query: the script goes to the child's
//! standard input, the first `sat`/`unsat`/`unknown` token of its standard
//! output is the answer, and any following s-expressions are searched for
//! the coordinate bindings. `unknown` maps to a timeout verdict, and the
//! child is killed at the per-query deadline.
//!
//! Path cost is encoded with one auxiliary real symbol per segment:
//! d_i ≥ 0 and d_i² equals the squared segment length, which pins
//! d_i to the exact Euclidean length; the sum of the d_i is bounded by the
//! scaled cost bound. Clearance constraints are the encoder's
//! integer-coefficient polynomials, asserted over the integer coordinate
//! variables.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::time::Duration;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use wait_timeout::ChildExt;

use super::RawOutcome;
use crate::encoder::{Monomial, OracleQuery, Poly, SegmentEnd};

/// Decimal places used to rationalize an irrational cost bound. Rational
/// bounds are emitted exactly; irrational ones are rounded down by less
/// than 10^-9, which can only make the query stricter.
const BOUND_DECIMAL_PLACES: u32 = 9;

/// Emits the complete SMT-LIB 2 script for a query. Byte-deterministic.
pub fn emit(query: &OracleQuery) -> String {
    let mut out = String::new();
    out.push_str("(set-option :produce-models true)\n");
    out.push_str("(set-logic QF_NIRA)\n");

    for i in 0..query.waypoint_count {
        for j in 0..2 {
            let name = coord_symbol(i, j);
            let (lo, hi) = &query.domain.intervals[2 * i + j];
            out.push_str(&format!("(declare-const {name} Int)\n"));
            out.push_str(&format!("(assert (<= {} {name}))\n", int_numeral(lo)));
            out.push_str(&format!("(assert (<= {name} {}))\n", int_numeral(hi)));
        }
    }

    for constraint in &query.clearance {
        let comment = format!(
            "; segment {} vs obstacle {}\n",
            constraint.segment_index, constraint.obstacle_index
        );
        out.push_str(&comment);
        out.push_str(&format!(
            "(assert (>= {} 0))\n",
            int_poly_sexpr(&constraint.endpoint_from)
        ));
        out.push_str(&format!(
            "(assert (>= {} 0))\n",
            int_poly_sexpr(&constraint.endpoint_to)
        ));
        out.push_str(&format!(
            "(assert (=> (and (>= {} 0) (>= {} 0)) (>= {} 0)))\n",
            int_poly_sexpr(&constraint.guard[0]),
            int_poly_sexpr(&constraint.guard[1]),
            int_poly_sexpr(&constraint.interior)
        ));
    }

    for (i, segment) in query.segments.iter().enumerate() {
        let d = distance_symbol(i);
        out.push_str(&format!("(declare-const {d} Real)\n"));
        out.push_str(&format!("(assert (>= {d} 0.0))\n"));
        let squared = segment_length_sq_poly(segment);
        out.push_str(&format!(
            "(assert (= (* {d} {d}) {}))\n",
            real_poly_sexpr(&squared)
        ));
    }

    // Σ dᵢ < J_c·p, distances being in grid-scaled units.
    let scaled_bound = query
        .cost_bound
        .scale(&BigRational::from_integer(BigInt::from(query.precision)));
    let bound_numeral = real_numeral(&scaled_bound.lower_bound_decimal(BOUND_DECIMAL_PLACES));
    let sum = (0..query.segments.len())
        .map(distance_symbol)
        .collect::<Vec<_>>()
        .join(" ");
    out.push_str(&format!("(assert (< (+ {sum}) {bound_numeral}))\n"));
    out.push_str("(check-sat)\n(get-model)\n");
    out
}

fn coord_symbol(waypoint: usize, axis: usize) -> String {
    format!("x_{waypoint}_{axis}")
}

fn distance_symbol(segment: usize) -> String {
    format!("d_{segment}")
}

fn int_numeral(value: &BigInt) -> String {
    if value.is_negative() {
        format!("(- {})", value.magnitude())
    } else {
        value.to_string()
    }
}

fn real_numeral(value: &BigRational) -> String {
    if value.is_negative() {
        return format!("(- {})", real_numeral(&-value));
    }
    if value.denom().is_one() {
        return format!("{}.0", value.numer());
    }
    format!("(/ {}.0 {}.0)", value.numer(), value.denom())
}

fn monomial_sexpr(mono: &Monomial) -> Option<String> {
    if mono.is_empty() {
        return None;
    }
    let mut parts = Vec::new();
    for (var, exp) in mono {
        let name = coord_symbol(var / 2, var % 2);
        for _ in 0..*exp {
            parts.push(name.clone());
        }
    }
    Some(parts.join(" "))
}

/// Integer-sorted polynomial term sum; the encoder guarantees integer
/// coefficients for clearance constraints.
fn int_poly_sexpr(poly: &Poly) -> String {
    let mut terms = Vec::new();
    for (mono, coeff) in poly.terms() {
        debug_assert!(coeff.denom().is_one());
        let c = int_numeral(coeff.numer());
        terms.push(match monomial_sexpr(mono) {
            Some(vars) => format!("(* {c} {vars})"),
            None => c,
        });
    }
    sum_sexpr(terms, "0")
}

/// Real-sorted polynomial with integer variables coerced via to_real;
/// coefficients may be rational.
fn real_poly_sexpr(poly: &Poly) -> String {
    let mut terms = Vec::new();
    for (mono, coeff) in poly.terms() {
        let c = real_numeral(coeff);
        terms.push(match mono_real_sexpr(mono) {
            Some(vars) => format!("(* {c} {vars})"),
            None => c,
        });
    }
    sum_sexpr(terms, "0.0")
}

fn mono_real_sexpr(mono: &Monomial) -> Option<String> {
    if mono.is_empty() {
        return None;
    }
    let mut parts = Vec::new();
    for (var, exp) in mono {
        let name = format!("(to_real {})", coord_symbol(var / 2, var % 2));
        for _ in 0..*exp {
            parts.push(name.clone());
        }
    }
    Some(parts.join(" "))
}

fn sum_sexpr(terms: Vec<String>, zero: &str) -> String {
    match terms.len() {
        0 => zero.to_string(),
        1 => terms.into_iter().next().unwrap(),
        _ => format!("(+ {})", terms.join(" ")),
    }
}

/// Squared length of a segment as a polynomial over the coordinate
/// variables (rational coefficients allowed for fixed endpoints).
fn segment_length_sq_poly(segment: &crate::encoder::QuerySegment) -> Poly {
    let end = |e: &SegmentEnd| -> (Poly, Poly) {
        match e {
            SegmentEnd::Fixed { x, y } => (Poly::constant(x.clone()), Poly::constant(y.clone())),
            SegmentEnd::Waypoint(i) => (Poly::var(2 * i), Poly::var(2 * i + 1)),
        }
    };
    let (ax, ay) = end(&segment.from);
    let (bx, by) = end(&segment.to);
    let dx = bx.sub(&ax);
    let dy = by.sub(&ay);
    dx.mul(&dx).add(&dy.mul(&dy))
}

/// Parsed solver answer, before model verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverAnswer {
    Sat(BTreeMap<String, BigInt>),
    Unsat,
    Unknown,
}

/// Parses solver standard output: the first token decides sat/unsat/unknown,
/// and for sat the following s-expressions are scanned for integer
/// `define-fun` bindings.
pub fn parse_solver_output(output: &str) -> Result<SolverAnswer, String> {
    let tokens = tokenize(output);
    let answer = match tokens.first() {
        Some(Token::Atom(word)) => word.as_str(),
        Some(_) => return Err(format!("expected an answer token, got `{}`", preview(output))),
        None => return Err("empty solver output".into()),
    };
    let mut pos = 1;
    match answer {
        "unsat" => Ok(SolverAnswer::Unsat),
        "unknown" => Ok(SolverAnswer::Unknown),
        "sat" => {
            let mut bindings = BTreeMap::new();
            while pos < tokens.len() {
                let (expr, next) = parse_sexpr(&tokens, pos)
                    .map_err(|e| format!("malformed model response: {e}"))?;
                pos = next;
                collect_define_funs(&expr, &mut bindings);
            }
            Ok(SolverAnswer::Sat(bindings))
        }
        other => Err(format!("unrecognized solver answer `{other}`")),
    }
}

/// Extracts the coordinate assignment for a query with the given waypoint
/// count from parsed model bindings.
pub fn assignment_from_model(
    bindings: &BTreeMap<String, BigInt>,
    waypoint_count: usize,
) -> Result<Vec<BigInt>, String> {
    let mut assignment = Vec::with_capacity(2 * waypoint_count);
    for i in 0..waypoint_count {
        for j in 0..2 {
            let name = coord_symbol(i, j);
            match bindings.get(&name) {
                Some(value) => assignment.push(value.clone()),
                None => return Err(format!("model is missing symbol `{name}`")),
            }
        }
    }
    Ok(assignment)
}

/// Convenience used by tests and the external runner: model text to grid
/// path coordinates.
pub fn parse_model(output: &str, waypoint_count: usize) -> Result<Vec<BigInt>, String> {
    match parse_solver_output(output)? {
        SolverAnswer::Sat(bindings) => assignment_from_model(&bindings, waypoint_count),
        SolverAnswer::Unsat => Err("response is `unsat`, not a model".into()),
        SolverAnswer::Unknown => Err("response is `unknown`, not a model".into()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Atom(String),
}

fn tokenize(text: &str) -> Vec<Token> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '(' => tokens.push(Token::Open),
            ')' => tokens.push(Token::Close),
            ';' => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        break;
                    }
                }
            }
            '"' => {
                let mut s = String::new();
                for c in chars.by_ref() {
                    if c == '"' {
                        break;
                    }
                    s.push(c);
                }
                tokens.push(Token::Atom(s));
            }
            c if c.is_whitespace() => {}
            c => {
                let mut atom = String::new();
                atom.push(c);
                while let Some(&next) = chars.peek() {
                    if next.is_whitespace() || next == '(' || next == ')' {
                        break;
                    }
                    atom.push(next);
                    chars.next();
                }
                tokens.push(Token::Atom(atom));
            }
        }
    }
    tokens
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Sexpr {
    Atom(String),
    List(Vec<Sexpr>),
}

fn parse_sexpr(tokens: &[Token], pos: usize) -> Result<(Sexpr, usize), String> {
    match tokens.get(pos) {
        Some(Token::Atom(a)) => Ok((Sexpr::Atom(a.clone()), pos + 1)),
        Some(Token::Open) => {
            let mut items = Vec::new();
            let mut cursor = pos + 1;
            loop {
                match tokens.get(cursor) {
                    Some(Token::Close) => return Ok((Sexpr::List(items), cursor + 1)),
                    Some(_) => {
                        let (item, next) = parse_sexpr(tokens, cursor)?;
                        items.push(item);
                        cursor = next;
                    }
                    None => return Err("unbalanced parenthesis".into()),
                }
            }
        }
        Some(Token::Close) => Err("unexpected `)`".into()),
        None => Err("unexpected end of input".into()),
    }
}

/// Walks an s-expression tree collecting `(define-fun name () Int value)`
/// style bindings; values may be plain numerals or negations written as
/// applications, the way solvers print negative numbers.
fn collect_define_funs(expr: &Sexpr, bindings: &mut BTreeMap<String, BigInt>) {
    match expr {
        Sexpr::List(items) => {
            if items.len() >= 5 {
                if let (Sexpr::Atom(head), Sexpr::Atom(name)) = (&items[0], &items[1]) {
                    if head == "define-fun" {
                        if let Some(value) = integer_value(&items[items.len() - 1]) {
                            bindings.insert(name.clone(), value);
                        }
                        return;
                    }
                }
            }
            for item in items {
                collect_define_funs(item, bindings);
            }
        }
        Sexpr::Atom(_) => {}
    }
}

fn integer_value(expr: &Sexpr) -> Option<BigInt> {
    match expr {
        Sexpr::Atom(a) => a.parse::<BigInt>().ok(),
        Sexpr::List(items) => {
            if items.len() == 2 {
                if let (Sexpr::Atom(op), Some(inner)) = (&items[0], integer_value(&items[1])) {
                    if op == "-" {
                        return Some(-inner);
                    }
                }
            }
            None
        }
    }
}

fn preview(text: &str) -> String {
    text.trim().chars().take(60).collect()
}

/// Splits a solver command line on whitespace, honoring single and double
/// quotes.
pub fn split_command(command: &str) -> Vec<String> {
    let mut args = Vec::new();
    let mut current = String::new();
    let mut quote: Option<char> = None;
    for c in command.chars() {
        match quote {
            Some(q) if c == q => quote = None,
            Some(_) => current.push(c),
            None if c == '\'' || c == '"' => quote = Some(c),
            None if c.is_whitespace() => {
                if !current.is_empty() {
                    args.push(std::mem::take(&mut current));
                }
            }
            None => current.push(c),
        }
    }
    if !current.is_empty() {
        args.push(current);
    }
    args
}

/// Runs one query against an external solver process.
pub(crate) fn run_external(
    query: &OracleQuery,
    command: &str,
    timeout: Option<Duration>,
) -> RawOutcome {
    let script = emit(query);
    let args = split_command(command);
    if args.is_empty() {
        return RawOutcome::Error("empty solver command".into());
    }
    let mut child = match Command::new(&args[0])
        .args(&args[1..])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
    {
        Ok(child) => child,
        Err(e) => {
            return RawOutcome::Error(format!("failed to spawn solver `{}`: {e}", args[0]));
        }
    };

    if let Some(mut stdin) = child.stdin.take() {
        if let Err(e) = stdin.write_all(script.as_bytes()) {
            let _ = child.kill();
            let _ = child.wait();
            return RawOutcome::Error(format!("failed to write query to solver: {e}"));
        }
        // handle drops here, closing the pipe so the solver sees EOF
    }

    let stdout_reader = spawn_reader(child.stdout.take());
    let stderr_reader = spawn_reader(child.stderr.take());

    let finished = match timeout {
        Some(limit) => match child.wait_timeout(limit) {
            Ok(status) => status.is_some(),
            Err(e) => {
                let _ = child.kill();
                let _ = child.wait();
                return RawOutcome::Error(format!("failed to wait for solver: {e}"));
            }
        },
        None => child.wait().is_ok(),
    };
    if !finished {
        let _ = child.kill();
        let _ = child.wait();
        return RawOutcome::Timeout;
    }

    let stdout = stdout_reader.join().unwrap_or_default();
    let stderr = stderr_reader.join().unwrap_or_default();

    match parse_solver_output(&stdout) {
        Ok(SolverAnswer::Unsat) => RawOutcome::Unsat,
        Ok(SolverAnswer::Unknown) => RawOutcome::Timeout,
        Ok(SolverAnswer::Sat(bindings)) => {
            match assignment_from_model(&bindings, query.waypoint_count) {
                Ok(assignment) => RawOutcome::Sat(assignment),
                Err(detail) => RawOutcome::Error(detail),
            }
        }
        Err(detail) => {
            let mut full = detail;
            if !stderr.trim().is_empty() {
                full.push_str(&format!("; solver stderr: {}", preview(&stderr)));
            }
            RawOutcome::Error(full)
        }
    }
}

fn spawn_reader<R: Read + Send + 'static>(
    source: Option<R>,
) -> std::thread::JoinHandle<String> {
    std::thread::spawn(move || {
        let mut text = String::new();
        if let Some(mut source) = source {
            let _ = source.read_to_string(&mut text);
        }
        text
    })
}
