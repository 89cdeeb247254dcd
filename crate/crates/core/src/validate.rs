//! Structural validation of a pair table on a finite window.
//!
//! Passing the associativity window is necessary but not sufficient for
//! global associativity.

use crate::engine::Engine;
use crate::error::ReduceError;
use crate::exec::Exec;
use crate::semigroup::{Element, Gen};

pub const DEFAULT_WINDOW: u64 = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociativityViolation {
    pub u: Element,
    pub v: Element,
    pub w: Element,
    pub left: Element,
    pub right: Element,
}

/// `x^i · y^j = x^k` with `k < i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonicityViolation {
    pub x: Gen,
    pub y: Gen,
    pub i: u64,
    pub j: u64,
    pub k: u64,
}

/// A reduction that failed while evaluating the listed operands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthFailure {
    pub operands: Vec<Element>,
    pub error: ReduceError,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub associativity_violations: Vec<AssociativityViolation>,
    pub monotonicity_violations: Vec<MonotonicityViolation>,
    pub depth_failures: Vec<DepthFailure>,
    pub window: u64,
    pub depth_bound: u64,
}

impl ValidationReport {
    pub fn accepted(&self) -> bool {
        self.associativity_violations.is_empty()
            && self.monotonicity_violations.is_empty()
            && self.depth_failures.is_empty()
    }
}

fn window_elements(engine: &Engine, window: u64) -> Vec<Element> {
    engine
        .spec()
        .gens()
        .flat_map(|g| (1..=window).map(move |e| Element { gen: g, exp: e }))
        .collect()
}

/// Checks `(uv)w = u(vw)` for all elements with exponents up to `window`.
pub fn check_associativity(engine: &Engine, window: u64, exec: Exec) -> ValidationReport {
    let window = window.max(2);
    let elems = window_elements(engine, window);
    let per_u = exec.map(&elems, |&u| {
        let mut violations = Vec::new();
        let mut failures = Vec::new();
        for &v in &elems {
            for &w in &elems {
                let left = engine.mul(u, v).and_then(|uv| engine.mul(uv, w));
                let right = engine.mul(v, w).and_then(|vw| engine.mul(u, vw));
                match (left, right) {
                    (Ok(left), Ok(right)) if left != right => {
                        violations.push(AssociativityViolation { u, v, w, left, right })
                    }
                    (Ok(_), Ok(_)) => {}
                    (Err(error), _) | (_, Err(error)) => failures.push(DepthFailure {
                        operands: vec![u, v, w],
                        error,
                    }),
                }
            }
        }
        (violations, failures)
    });
    let mut report = ValidationReport {
        window,
        depth_bound: engine.depth_bound(),
        ..Default::default()
    };
    for (v, f) in per_u {
        report.associativity_violations.extend(v);
        report.depth_failures.extend(f);
    }
    report
}

/// Checks that `x^i · y^j = x^k` forces `i <= k` for `i, j <= window`.
pub fn check_exponent_monotonicity(engine: &Engine, window: u64) -> ValidationReport {
    let window = window.max(1);
    let mut report = ValidationReport {
        window,
        depth_bound: engine.depth_bound(),
        ..Default::default()
    };
    let spec = engine.spec();
    for x in spec.gens() {
        for y in spec.gens() {
            for i in 1..=window {
                for j in 1..=window {
                    let u = Element { gen: x, exp: i };
                    match engine.mul_pow(u, y, j) {
                        Ok(r) if r.gen == x && r.exp < i => report
                            .monotonicity_violations
                            .push(MonotonicityViolation { x, y, i, j, k: r.exp }),
                        Ok(_) => {}
                        Err(error) => report.depth_failures.push(DepthFailure {
                            operands: vec![u, Element { gen: y, exp: j }],
                            error,
                        }),
                    }
                }
            }
        }
    }
    report
}

/// Runs both window checks and merges them into one report.
pub fn validate(engine: &Engine, window: u64, exec: Exec) -> ValidationReport {
    let mut report = check_associativity(engine, window, exec);
    let mono = check_exponent_monotonicity(engine, window);
    report.monotonicity_violations = mono.monotonicity_violations;
    report.depth_failures.extend(mono.depth_failures);
    report
}
