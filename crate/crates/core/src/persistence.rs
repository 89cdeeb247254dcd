//! Trajectories `x·y^i`, persistence detection and the multipliers `M(y, z)`.
//!
//! A target `z` is `y`-persistent when some `x·y^i` lands in `⟨z⟩` for
//! infinitely many `i`. A single return `z^t·y^q = z^s` certifies this for
//! the starting point `x = z^t` (and every `x·y^(qm)` stays in `⟨z⟩`), with
//! multiplier `M(y, z) = (s - t)/q`. Detection is pair-level; trajectories
//! are only used to cross-check the structure they are supposed to have.

use std::collections::BTreeMap;

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::rational::Rational;
use crate::semigroup::{Element, Gen, SemigroupSpec};

pub const DEFAULT_HORIZON: u64 = 64;
pub const DEFAULT_RETURN_BOUND: u64 = 16;

/// Summary of one target `z` hit at least twice along a trajectory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSummary {
    pub z: Gen,
    pub i0: u64,
    pub n0: u64,
    /// Gap from the first to the second hit.
    pub r: u64,
    /// Slope `(n(i0 + r) - n0) / r`; nonnegative on valid specs.
    pub m: Rational,
    /// All hit indices `i <= horizon`, ascending.
    pub hits: Vec<u64>,
}

/// Eventual period of the target sequence: `f(i + length) = f(i)` for `i >= start`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Period {
    pub start: u64,
    pub length: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrajectoryRecord {
    pub x: Element,
    pub y: Gen,
    pub horizon: u64,
    /// `steps[i - 1] = x·y^i`.
    pub steps: Vec<Element>,
    pub targets: Vec<TargetSummary>,
    pub period: Option<Period>,
}

impl TrajectoryRecord {
    /// `x·y^i` for `1 <= i <= horizon`.
    pub fn at(&self, i: u64) -> Element {
        self.steps[(i - 1) as usize]
    }

    pub fn target(&self, z: Gen) -> Option<&TargetSummary> {
        self.targets.iter().find(|t| t.z == z)
    }
}

/// The equation `z^t · y^q = z^s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Return {
    pub y: Gen,
    pub z: Gen,
    pub t: u64,
    pub q: u64,
    pub s: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub m: Rational,
    pub witness: Return,
}

/// Relation of detected persistent pairs `(y, z)` ("`z` is `y`-persistent").
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PersistenceGraph {
    pub size: usize,
    pub edges: BTreeMap<(Gen, Gen), Edge>,
}

impl PersistenceGraph {
    pub fn edge(&self, y: Gen, z: Gen) -> Option<&Edge> {
        self.edges.get(&(y, z))
    }

    pub fn m(&self, y: Gen, z: Gen) -> Option<Rational> {
        self.edge(y, z).map(|e| e.m)
    }

    pub fn successors(&self, y: Gen) -> impl Iterator<Item = (Gen, &Edge)> {
        self.edges
            .range((y, Gen(0))..=(y, Gen(u16::MAX)))
            .map(|(&(_, z), e)| (z, e))
    }

    pub fn gens(&self) -> impl Iterator<Item = Gen> {
        (0..self.size as u16).map(Gen)
    }
}

/// Computes `x·y^i` for `i = 1..=horizon` and summarizes repeated targets.
///
/// Fails with [`Error::HorizonExhausted`] when no periodic regime is
/// certified within the horizon.
pub fn trajectory(engine: &Engine, x: Element, y: Gen, horizon: u64) -> Result<TrajectoryRecord> {
    let record = trajectory_unchecked(engine, x, y, horizon)?;
    if record.period.is_none() {
        return Err(Error::HorizonExhausted { x, y, horizon });
    }
    Ok(record)
}

/// Like [`trajectory`] but records `period: None` instead of failing.
pub fn trajectory_unchecked(engine: &Engine, x: Element, y: Gen, horizon: u64) -> Result<TrajectoryRecord> {
    let horizon = horizon.max(2);
    let mut steps = Vec::with_capacity(horizon as usize);
    let mut cur = engine.right_mul_gen(x, y)?;
    steps.push(cur);
    for _ in 1..horizon {
        cur = engine.right_mul_gen(cur, y)?;
        steps.push(cur);
    }

    let mut hits: BTreeMap<Gen, Vec<u64>> = BTreeMap::new();
    for (idx, e) in steps.iter().enumerate() {
        hits.entry(e.gen).or_default().push(idx as u64 + 1);
    }
    let mut transient_end = 0;
    let mut targets = Vec::new();
    for (z, hit) in hits {
        if hit.len() < 2 {
            transient_end = transient_end.max(hit[0]);
            continue;
        }
        let (i0, i1) = (hit[0], hit[1]);
        let n0 = steps[(i0 - 1) as usize].exp;
        let n1 = steps[(i1 - 1) as usize].exp;
        let r = i1 - i0;
        let m = Rational::new(n1 as i128 - n0 as i128, r as i128);
        targets.push(TargetSummary {
            z,
            i0,
            n0,
            r,
            m,
            hits: hit,
        });
    }
    let period = find_period(&steps, &targets, transient_end + 1);
    Ok(TrajectoryRecord {
        x,
        y,
        horizon,
        steps,
        targets,
        period,
    })
}

/// Smallest positive `T` lying in every `E0(z)` (within the horizon) that is
/// also a period of the target sequence from `start` on, with at least two
/// full periods observed.
fn find_period(steps: &[Element], targets: &[TargetSummary], start: u64) -> Option<Period> {
    if targets.is_empty() {
        return None;
    }
    let h = steps.len() as u64;
    let f = |i: u64| steps[(i - 1) as usize].gen;
    (1..=h).find_map(|t| {
        if h + 1 < start + 2 * t {
            return None;
        }
        let in_all = targets.iter().all(|s| s.i0 + t <= h && f(s.i0 + t) == s.z);
        let periodic = (start..=h - t).all(|i| f(i) == f(i + t));
        (in_all && periodic).then_some(Period { start, length: t })
    })
}

/// First `(t, q)` in lexicographic order with `z^t · y^q ∈ ⟨z⟩`.
pub fn find_return(engine: &Engine, y: Gen, z: Gen, t_max: u64, q_max: u64) -> Result<Option<Return>> {
    for t in 1..=t_max {
        for q in 1..=q_max {
            let r = engine.mul_pow(Element { gen: z, exp: t }, y, q)?;
            if r.gen == z {
                return Ok(Some(Return { y, z, t, q, s: r.exp }));
            }
        }
    }
    Ok(None)
}

/// `(s - t)/q` in lowest terms; negative values mark an invalid spec.
pub fn compute_m(ret: &Return) -> Result<Rational> {
    if ret.s < ret.t {
        return Err(Error::NegativeMultiplier {
            y: ret.y,
            z: ret.z,
            t: ret.t,
            q: ret.q,
            s: ret.s,
        });
    }
    Ok(Rational::new((ret.s - ret.t) as i128, ret.q as i128))
}

/// Searches every ordered pair for a return and records the detected edges.
pub fn build_persistence_graph(engine: &Engine, t_max: u64, q_max: u64, exec: Exec) -> Result<PersistenceGraph> {
    let spec = engine.spec();
    let pairs: Vec<(Gen, Gen)> = spec.gens().flat_map(|y| spec.gens().map(move |z| (y, z))).collect();
    let found = exec.map(&pairs, |&(y, z)| find_return(engine, y, z, t_max, q_max));
    let mut edges = BTreeMap::new();
    for ((y, z), ret) in pairs.into_iter().zip(found) {
        if let Some(ret) = ret? {
            let m = compute_m(&ret)?;
            edges.insert((y, z), Edge { m, witness: ret });
        }
    }
    for g in spec.gens() {
        // y·y = y^2 is always found at (1, 1); this only guards tiny bounds
        edges.entry((g, g)).or_insert(Edge {
            m: Rational::ONE,
            witness: Return {
                y: g,
                z: g,
                t: 1,
                q: 1,
                s: 2,
            },
        });
    }
    Ok(PersistenceGraph {
        size: spec.len(),
        edges,
    })
}

/// A structural claim that failed to hold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureViolation {
    UnsoundWitness {
        ret: Return,
        actual: Element,
    },
    InconsistentMultiplier {
        ret: Return,
        m: Rational,
        graph_m: Rational,
    },
    XDependence {
        x: Element,
        y: Gen,
        z: Gen,
        trajectory_m: Rational,
        graph_m: Rational,
    },
    UndetectedEdge {
        x: Element,
        y: Gen,
        z: Gen,
    },
    MissingComposite {
        x: Gen,
        y: Gen,
        z: Gen,
    },
    TransitivityMismatch {
        x: Gen,
        y: Gen,
        z: Gen,
        expected: Rational,
        found: Rational,
    },
    NotAdditivelyClosed {
        x: Element,
        y: Gen,
        z: Gen,
        j: u64,
        k: u64,
    },
    NonLinearExponent {
        x: Element,
        y: Gen,
        z: Gen,
        i: u64,
        expected: Rational,
        found: u64,
    },
    NegativeSlope {
        x: Element,
        y: Gen,
        z: Gen,
        m: Rational,
    },
    NotPeriodic {
        x: Element,
        y: Gen,
        i: u64,
    },
    PeriodOutsideE0 {
        x: Element,
        y: Gen,
        z: Gen,
        period: u64,
    },
    MissingPeriod {
        x: Element,
        y: Gen,
    },
}

impl StructureViolation {
    /// True for violations that bigger search bounds might resolve.
    pub fn is_bound_related(&self) -> bool {
        matches!(
            self,
            StructureViolation::UndetectedEdge { .. }
                | StructureViolation::MissingComposite { .. }
                | StructureViolation::MissingPeriod { .. }
        )
    }

    pub fn describe(&self, spec: &SemigroupSpec) -> String {
        let n = |g: Gen| spec.name(g).to_string();
        let e = |x: Element| spec.named(x).to_string();
        match self {
            StructureViolation::UnsoundWitness { ret, actual } => format!(
                "witness {z}^{}·{y}^{} = {z}^{} does not hold (got {})",
                ret.t,
                ret.q,
                ret.s,
                e(*actual),
                z = n(ret.z),
                y = n(ret.y)
            ),
            StructureViolation::InconsistentMultiplier { ret, m, graph_m } => format!(
                "return {z}^{}·{y}^{} = {z}^{} gives M = {m}, edge has {graph_m}",
                ret.t,
                ret.q,
                ret.s,
                z = n(ret.z),
                y = n(ret.y)
            ),
            StructureViolation::XDependence {
                x,
                y,
                z,
                trajectory_m,
                graph_m,
            } => format!(
                "trajectory {}·{}^i gives M({}, {}) = {trajectory_m}, edge has {graph_m}",
                e(*x),
                n(*y),
                n(*y),
                n(*z)
            ),
            StructureViolation::UndetectedEdge { x, y, z } => format!(
                "trajectory {}·{}^i hits {} twice but no return was found within bounds",
                e(*x),
                n(*y),
                n(*z)
            ),
            StructureViolation::MissingComposite { x, y, z } => format!(
                "edges ({0}, {1}) and ({1}, {2}) exist but ({0}, {2}) was not detected",
                n(*x),
                n(*y),
                n(*z)
            ),
            StructureViolation::TransitivityMismatch {
                x,
                y,
                z,
                expected,
                found,
            } => format!(
                "M({}, {}) = {found}, expected M({0}, {}) · M({1}, {2}) = {expected}",
                n(*x),
                n(*z),
                n(*y)
            ),
            StructureViolation::NotAdditivelyClosed { x, y, z, j, k } => format!(
                "trajectory {}·{}^i: {j} and {k} lie in E0 for {} but {} does not",
                e(*x),
                n(*y),
                n(*z),
                j + k
            ),
            StructureViolation::NonLinearExponent {
                x,
                y,
                z,
                i,
                expected,
                found,
            } => format!(
                "trajectory {}·{}^i at i = {i}: exponent of {} is {found}, linear law gives {expected}",
                e(*x),
                n(*y),
                n(*z)
            ),
            StructureViolation::NegativeSlope { x, y, z, m } => {
                format!("trajectory {}·{}^i has slope {m} < 0 on {}", e(*x), n(*y), n(*z))
            }
            StructureViolation::NotPeriodic { x, y, i } => {
                format!("trajectory {}·{}^i breaks its recorded period at i = {i}", e(*x), n(*y))
            }
            StructureViolation::PeriodOutsideE0 { x, y, z, period } => format!(
                "trajectory {}·{}^i: period {period} is not in E0 for {}",
                e(*x),
                n(*y),
                n(*z)
            ),
            StructureViolation::MissingPeriod { x, y } => {
                format!("trajectory {}·{}^i has no certified period", e(*x), n(*y))
            }
        }
    }
}

/// Re-evaluates every witness and checks that all returns within the bounds
/// agree on `M(y, z)`.
pub fn verify_multipliers(
    engine: &Engine,
    graph: &PersistenceGraph,
    t_max: u64,
    q_max: u64,
) -> Result<Vec<StructureViolation>> {
    let mut out = Vec::new();
    for edge in graph.edges.values() {
        let ret = edge.witness;
        let actual = engine.mul_pow(Element { gen: ret.z, exp: ret.t }, ret.y, ret.q)?;
        if actual != (Element { gen: ret.z, exp: ret.s }) {
            out.push(StructureViolation::UnsoundWitness { ret, actual });
        }
        for t in 1..=t_max {
            for q in 1..=q_max {
                let r = engine.mul_pow(Element { gen: ret.z, exp: t }, ret.y, q)?;
                if r.gen != ret.z {
                    continue;
                }
                let other = Return { t, q, s: r.exp, ..ret };
                let m = Rational::new(r.exp as i128 - t as i128, q as i128);
                if m != edge.m {
                    out.push(StructureViolation::InconsistentMultiplier {
                        ret: other,
                        m,
                        graph_m: edge.m,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Generators plus all products of two generators, sorted and deduplicated.
pub fn default_samples(engine: &Engine) -> Result<Vec<Element>> {
    let spec = engine.spec();
    let mut out: Vec<Element> = spec.gens().map(Element::generator).collect();
    for x in spec.gens() {
        for y in spec.gens() {
            out.push(engine.right_mul_gen(Element::generator(x), y)?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Trajectories for every sample against every generator, in order.
pub fn sample_trajectories(
    engine: &Engine,
    samples: &[Element],
    horizon: u64,
    exec: Exec,
) -> Result<Vec<TrajectoryRecord>> {
    let pairs: Vec<(Element, Gen)> = samples
        .iter()
        .flat_map(|&x| engine.spec().gens().map(move |y| (x, y)))
        .collect();
    exec.map(&pairs, |&(x, y)| trajectory(engine, x, y, horizon))
        .into_iter()
        .collect()
}

/// Every trajectory-derived `M` must match the graph, whatever the start `x`.
pub fn verify_x_independence(graph: &PersistenceGraph, trajectories: &[TrajectoryRecord]) -> Vec<StructureViolation> {
    let mut out = Vec::new();
    for rec in trajectories {
        for t in &rec.targets {
            match graph.m(rec.y, t.z) {
                Some(graph_m) if graph_m != t.m => out.push(StructureViolation::XDependence {
                    x: rec.x,
                    y: rec.y,
                    z: t.z,
                    trajectory_m: t.m,
                    graph_m,
                }),
                Some(_) => {}
                None => out.push(StructureViolation::UndetectedEdge {
                    x: rec.x,
                    y: rec.y,
                    z: t.z,
                }),
            }
        }
    }
    out
}

/// Composable edges `(x, y)`, `(y, z)` need `(x, z)` with the product multiplier.
pub fn verify_transitivity(graph: &PersistenceGraph) -> Result<Vec<StructureViolation>> {
    let mut out = Vec::new();
    for (&(x, y), first) in &graph.edges {
        for (z, second) in graph.successors(y) {
            let expected = first.m.checked_mul(second.m)?;
            match graph.m(x, z) {
                None => out.push(StructureViolation::MissingComposite { x, y, z }),
                Some(found) if found != expected => out.push(StructureViolation::TransitivityMismatch {
                    x,
                    y,
                    z,
                    expected,
                    found,
                }),
                Some(_) => {}
            }
        }
    }
    Ok(out)
}

/// Checks the hit-set, linearity and periodicity structure of one record.
pub fn verify_trajectory_structure(rec: &TrajectoryRecord) -> Vec<StructureViolation> {
    let mut out = Vec::new();
    let (x, y, h) = (rec.x, rec.y, rec.horizon);
    for t in &rec.targets {
        let z = t.z;
        if t.m.is_negative() {
            out.push(StructureViolation::NegativeSlope { x, y, z, m: t.m });
        }
        let in_e0 = |j: u64| t.i0 + j <= h && rec.at(t.i0 + j).gen == z;
        let e0: Vec<u64> = t.hits.iter().map(|i| i - t.i0).collect();
        'closure: for (a, &j) in e0.iter().enumerate() {
            for &k in &e0[a..] {
                if t.i0 + j + k > h {
                    break;
                }
                if !in_e0(j + k) {
                    out.push(StructureViolation::NotAdditivelyClosed { x, y, z, j, k });
                    break 'closure;
                }
            }
        }
        for &i in &t.hits {
            let expected =
                t.m.checked_mul(Rational::integer((i - t.i0) as i128))
                    .and_then(|v| v.checked_add(Rational::integer(t.n0 as i128)));
            let found = rec.at(i).exp;
            if expected
                .as_ref()
                .map_or(true, |&e| e != Rational::integer(found as i128))
            {
                out.push(StructureViolation::NonLinearExponent {
                    x,
                    y,
                    z,
                    i,
                    expected: expected.unwrap_or(Rational::ZERO),
                    found,
                });
            }
        }
    }
    match rec.period {
        None => out.push(StructureViolation::MissingPeriod { x, y }),
        Some(p) => {
            if let Some(i) = (p.start..=h.saturating_sub(p.length)).find(|&i| rec.at(i).gen != rec.at(i + p.length).gen)
            {
                out.push(StructureViolation::NotPeriodic { x, y, i });
            }
            for t in &rec.targets {
                let ok = t.i0 + p.length <= h && rec.at(t.i0 + p.length).gen == t.z;
                if !ok {
                    out.push(StructureViolation::PeriodOutsideE0 {
                        x,
                        y,
                        z: t.z,
                        period: p.length,
                    });
                }
            }
        }
    }
    out
}
