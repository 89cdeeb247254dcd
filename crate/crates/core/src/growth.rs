//! Ball enumeration and the linear-growth certificate `|J(m)| <= L·K·m`.
//!
//! `K` bounds the defect `δ(x, y, i) = d(x·y^i) - d(y)·i` over generators
//! `x, y`. Inside a periodic regime each hit of a persistent target `z`
//! advances `δ` by `(d(z)·M(y, z) - d(y))` per unit of `i`, which is `<= 0`
//! by the weight inequality, so the maximum over a certified horizon is the
//! global maximum. [`verify_k_window`] re-checks a later window anyway.

use std::collections::BTreeSet;

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::persistence::{trajectory, PersistenceGraph};
use crate::rational::Rational;
use crate::semigroup::{Element, Gen};
use crate::weights::WeightAssignment;

pub const DEFAULT_M_MAX: u64 = 12;
pub const DEFAULT_FRONTIER_CAP: usize = 10_000_000;

/// Largest defect seen along `x·y^i` for `i <= horizon`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectRow {
    pub x: Gen,
    pub y: Gen,
    pub max_defect: i128,
    pub at: u64,
}

/// `d(z)·n0 - d(y)·i0` for a repeated target `z` of `x·y^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetBound {
    pub x: Gen,
    pub y: Gen,
    pub z: Gen,
    pub bound: i128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KBound {
    pub k: u64,
    pub defects: Vec<DefectRow>,
    pub target_bounds: Vec<TargetBound>,
    pub horizon: u64,
}

fn defect(d: &WeightAssignment, e: Element, y: Gen, i: u64) -> Result<i128> {
    let de = d.extend(e)? as i128;
    let dy = (d.get(y) as i128)
        .checked_mul(i as i128)
        .ok_or(Error::ArithmeticOverflow)?;
    Ok(de - dy)
}

/// Computes `K` from the defect table over `1 <= i <= horizon`.
pub fn compute_k(engine: &Engine, d: &WeightAssignment, horizon: u64, exec: Exec) -> Result<KBound> {
    let spec = engine.spec();
    let pairs: Vec<(Gen, Gen)> = spec.gens().flat_map(|x| spec.gens().map(move |y| (x, y))).collect();
    let rows = exec.map(&pairs, |&(x, y)| -> Result<(DefectRow, Vec<TargetBound>)> {
        let rec = trajectory(engine, Element::generator(x), y, horizon)?;
        let mut best = DefectRow {
            x,
            y,
            max_defect: i128::MIN,
            at: 0,
        };
        for i in 1..=rec.horizon {
            let delta = defect(d, rec.at(i), y, i)?;
            if delta > best.max_defect {
                best.max_defect = delta;
                best.at = i;
            }
        }
        let bounds = rec
            .targets
            .iter()
            .map(|t| TargetBound {
                x,
                y,
                z: t.z,
                bound: d.get(t.z) as i128 * t.n0 as i128 - d.get(y) as i128 * t.i0 as i128,
            })
            .collect();
        Ok((best, bounds))
    });
    let mut k: i128 = spec.gens().map(|g| d.get(g) as i128).max().unwrap_or(1);
    let mut defects = Vec::new();
    let mut target_bounds = Vec::new();
    for row in rows {
        let (row, bounds) = row?;
        k = k.max(row.max_defect);
        defects.push(row);
        target_bounds.extend(bounds);
    }
    Ok(KBound {
        k: u64::try_from(k.max(1)).map_err(|_| Error::ArithmeticOverflow)?,
        defects,
        target_bounds,
        horizon,
    })
}

/// A defect exceeding `K` on the re-check window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectViolation {
    pub x: Gen,
    pub y: Gen,
    pub i: u64,
    pub defect: i128,
}

/// Checks `δ(x, y, i) <= k` for `from < i <= to`.
pub fn verify_k_window(
    engine: &Engine,
    d: &WeightAssignment,
    k: u64,
    from: u64,
    to: u64,
) -> Result<Vec<DefectViolation>> {
    let spec = engine.spec();
    let mut out = Vec::new();
    for x in spec.gens() {
        for y in spec.gens() {
            let mut cur = Element::generator(x);
            for i in 1..=to {
                cur = engine.right_mul_gen(cur, y)?;
                if i <= from {
                    continue;
                }
                let delta = defect(d, cur, y, i)?;
                if delta > k as i128 {
                    out.push(DefectViolation { x, y, i, defect: delta });
                }
            }
        }
    }
    Ok(out)
}

/// `L = Σ 1/d(a)`.
pub fn compute_l(d: &WeightAssignment) -> Result<Rational> {
    d.d.iter()
        .try_fold(Rational::ZERO, |acc, &w| acc.checked_add(Rational::new(1, w as i128)))
}

/// `|I(r)| = Σ floor(r / d(a))`, the number of elements of weight `<= r`.
pub fn count_i(d: &WeightAssignment, r: u64) -> u64 {
    d.d.iter().map(|&w| r / w).sum()
}

/// Word-length balls `J(1) ⊆ J(2) ⊆ ...` built by breadth-first closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    /// Sorted, deduplicated elements of `J(m)` for the largest `m` reached.
    pub elements: Vec<Element>,
    /// `counts[m - 1] = |J(m)|`.
    pub counts: Vec<usize>,
    /// `depth[k]` is the shortest word length reaching `elements[k]`.
    pub depth: Vec<u64>,
}

impl Ball {
    pub fn count(&self, m: u64) -> usize {
        self.counts[(m - 1) as usize]
    }

    /// Elements of `J(m)`.
    pub fn within(&self, m: u64) -> impl Iterator<Item = Element> + '_ {
        self.elements
            .iter()
            .zip(&self.depth)
            .filter(move |(_, &dp)| dp <= m)
            .map(|(&e, _)| e)
    }
}

/// Enumerates `J(1..=m)`. Each BFS level is expanded with `exec` and merged
/// into a sorted set, so the result does not depend on scheduling.
pub fn enumerate_balls(engine: &Engine, m: u64, frontier_cap: usize, exec: Exec) -> Result<Ball> {
    let spec = engine.spec();
    let gens: Vec<Gen> = spec.gens().collect();
    let mut seen: BTreeSet<Element> = BTreeSet::new();
    let mut found: Vec<(Element, u64)> = Vec::new();
    let mut frontier: Vec<Element> = gens.iter().map(|&g| Element::generator(g)).collect();
    let mut counts = Vec::with_capacity(m as usize);
    for level in 1..=m {
        for &e in &frontier {
            seen.insert(e);
            found.push((e, level));
        }
        counts.push(seen.len());
        if level == m {
            break;
        }
        let expanded = exec.map(&frontier, |&e| -> Result<Vec<Element>> {
            gens.iter().map(|&y| Ok(engine.right_mul_gen(e, y)?)).collect()
        });
        let mut next = BTreeSet::new();
        for products in expanded {
            for p in products? {
                if !seen.contains(&p) {
                    next.insert(p);
                }
            }
        }
        if next.len() > frontier_cap {
            return Err(Error::FrontierCap {
                size: next.len(),
                cap: frontier_cap,
            });
        }
        frontier = next.into_iter().collect();
    }
    found.sort();
    let (elements, depth) = found.into_iter().unzip();
    Ok(Ball {
        elements,
        counts,
        depth,
    })
}

/// `J(m)` as a sorted set.
pub fn enumerate_ball(engine: &Engine, m: u64, exec: Exec) -> Result<Vec<Element>> {
    Ok(enumerate_balls(engine, m, DEFAULT_FRONTIER_CAP, exec)?.elements)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BallRow {
    pub m: u64,
    pub count: u64,
    /// `ceil(L·K·m)`.
    pub bound: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthCertificate {
    pub d: WeightAssignment,
    pub k: KBound,
    pub l: Rational,
    pub bound_coefficient: Rational,
    pub balls: Vec<BallRow>,
    pub horizon_used: u64,
}

fn violation(m: u64, witness: Element, reason: String) -> Error {
    Error::CertificateViolation { m, witness, reason }
}

/// Checks the whole chain `J(m) ⊆ I(K·m)`, `|I(K·m)| <= L·K·m` on the
/// enumerated balls, plus `d(x·u) <= K + d(u)` on `J(m_max)`.
#[allow(clippy::too_many_arguments)]
pub fn certify(
    engine: &Engine,
    graph: &PersistenceGraph,
    d: &WeightAssignment,
    k: &KBound,
    l: Rational,
    m_max: u64,
    frontier_cap: usize,
    exec: Exec,
) -> Result<GrowthCertificate> {
    debug_assert_eq!(graph.size, d.d.len());
    let kk = k.k;
    let coefficient = l.checked_mul(Rational::integer(kk as i128))?;
    let ball = enumerate_balls(engine, m_max, frontier_cap, exec)?;
    let mut balls = Vec::with_capacity(m_max as usize);
    for m in 1..=m_max {
        let count = ball.count(m) as u64;
        let radius = kk.checked_mul(m).ok_or(Error::ArithmeticOverflow)?;
        for w in ball.within(m) {
            // word bound d(u) <= K·|u|
            if d.extend(w)? > radius {
                return Err(violation(m, w, format!("d(w) = {} > K·m = {radius}", d.extend(w)?)));
            }
        }
        if count > count_i(d, radius) {
            let w = ball.within(m).next().expect("balls are nonempty");
            return Err(violation(m, w, format!("|J(m)| = {count} > |I(K·m)|")));
        }
        let bound = coefficient.checked_mul(Rational::integer(m as i128))?;
        if bound.cmp_int(count as i128).is_lt() {
            let w = ball.within(m).next().expect("balls are nonempty");
            return Err(violation(m, w, format!("|J(m)| = {count} > L·K·m = {bound}")));
        }
        balls.push(BallRow {
            m,
            count,
            bound: u64::try_from(bound.ceil()).map_err(|_| Error::ArithmeticOverflow)?,
        });
    }

    let top: Vec<Element> = ball.within(m_max).collect();
    let gens: Vec<Gen> = engine.spec().gens().collect();
    let sub = exec.map(&top, |&u| -> Result<Option<(Element, String)>> {
        let du = d.extend(u)?;
        for &x in &gens {
            let xu = engine.mul(Element::generator(x), u)?;
            if d.extend(xu)? > du + kk {
                return Ok(Some((
                    u,
                    format!("d(x·u) = {} > K + d(u) = {}", d.extend(xu)?, du + kk),
                )));
            }
        }
        Ok(None)
    });
    for r in sub {
        if let Some((u, reason)) = r? {
            return Err(violation(m_max, u, reason));
        }
    }

    for r in 1..=kk.saturating_mul(m_max) {
        let weighed = top.iter().filter(|&&w| d.extend(w).is_ok_and(|v| v <= r)).count() as u64;
        let counted = count_i(d, r);
        let linear = l.checked_mul(Rational::integer(r as i128))?;
        if weighed > counted || linear.cmp_int(counted as i128).is_lt() {
            return Err(violation(
                m_max,
                top[0],
                format!("counting bound fails at r = {r}: {weighed} elements, |I(r)| = {counted}, L·r = {linear}"),
            ));
        }
    }

    Ok(GrowthCertificate {
        d: d.clone(),
        k: k.clone(),
        l,
        bound_coefficient: coefficient,
        balls,
        horizon_used: k.horizon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semigroup::SemigroupSpec;

    fn engine(src: &str) -> Engine {
        Engine::new(SemigroupSpec::parse_compact(src).unwrap())
    }

    #[test]
    fn understated_k_is_a_certificate_violation() {
        let shift = engine("ab; ab=a^3, ba=a^3");
        let graph = crate::persistence::build_persistence_graph(&shift, 16, 16, Exec::Sequential).unwrap();
        let d = WeightAssignment { d: vec![1, 2] };
        let mut k = compute_k(&shift, &d, 64, Exec::Sequential).unwrap();
        k.k = 1;
        let l = compute_l(&d).unwrap();
        let err = certify(&shift, &graph, &d, &k, l, 6, DEFAULT_FRONTIER_CAP, Exec::Sequential).unwrap_err();
        assert!(matches!(err, Error::CertificateViolation { m: 1, .. }), "{err:?}");
    }

    #[test]
    fn counting_formula() {
        let d = WeightAssignment { d: vec![1, 2] };
        assert_eq!(count_i(&d, 4), 6);
        assert_eq!(count_i(&WeightAssignment { d: vec![3, 5] }, 2), 0);
        assert_eq!(count_i(&WeightAssignment { d: vec![1, 1] }, 3), 6);
    }

    #[test]
    fn l_is_sum_of_reciprocals() {
        assert_eq!(
            compute_l(&WeightAssignment { d: vec![1, 1] }).unwrap(),
            Rational::integer(2)
        );
        assert_eq!(
            compute_l(&WeightAssignment { d: vec![1, 2] }).unwrap(),
            Rational::new(3, 2)
        );
        assert_eq!(compute_l(&WeightAssignment { d: vec![1] }).unwrap(), Rational::ONE);
    }

    #[test]
    fn k_for_fold_and_shift2() {
        let fold = engine("ab; ab=a^2, ba=a^2");
        let k = compute_k(&fold, &WeightAssignment { d: vec![1, 1] }, 64, Exec::Sequential).unwrap();
        assert_eq!(k.k, 1);
        let shift = engine("ab; ab=a^3, ba=a^3");
        let d = WeightAssignment { d: vec![1, 2] };
        let k = compute_k(&shift, &d, 64, Exec::Sequential).unwrap();
        assert_eq!(k.k, 2);
        let row = k.defects.iter().find(|r| r.x == Gen(1) && r.y == Gen(0)).unwrap();
        assert_eq!(row.max_defect, 2);
        assert!(verify_k_window(&shift, &d, 2, 64, 128).unwrap().is_empty());
        let single = engine("a");
        assert_eq!(
            compute_k(&single, &WeightAssignment { d: vec![1] }, 8, Exec::Sequential)
                .unwrap()
                .k,
            1
        );
    }

    #[test]
    fn balls_of_fold_and_shift2() {
        let fold = engine("ab; ab=a^2, ba=a^2");
        let b = enumerate_ball(&fold, 3, Exec::Sequential).unwrap();
        let a = |e| Element::new(Gen(0), e);
        let bb = |e| Element::new(Gen(1), e);
        assert_eq!(b, vec![a(1), a(2), a(3), bb(1), bb(2), bb(3)]);
        let shift = engine("ab; ab=a^3, ba=a^3");
        let b = enumerate_ball(&shift, 3, Exec::Parallel).unwrap();
        assert_eq!(b, vec![a(1), a(2), a(3), a(4), a(5), bb(1), bb(2), bb(3)]);
        assert_eq!(enumerate_ball(&shift, 1, Exec::Sequential).unwrap().len(), 2);
    }

    #[test]
    fn frontier_cap_is_a_clean_error() {
        let fold = engine("ab; ab=a^2, ba=a^2");
        assert!(matches!(
            enumerate_balls(&fold, 5, 1, Exec::Sequential),
            Err(Error::FrontierCap { .. })
        ));
    }
}
