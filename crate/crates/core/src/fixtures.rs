//! Curated example semigroups and an exhaustive search over small tables.

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::pipeline::{run_all, Config};
use crate::rational::Rational;
use crate::semigroup::{Element, Gen, SemigroupSpec};

pub const FIXTURE_NAMES: [&str; 5] = ["fold", "shift2", "swap", "cascade3", "nonassoc"];

/// Known results for a fixture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expected {
    Accepted {
        /// `(y, z, M(y, z))` in alphabet order, reflexive edges included.
        edges: Vec<(Gen, Gen, Rational)>,
        d: Vec<u64>,
        k: u64,
        l: Rational,
        /// `|J(m)|` for `m = 1..=12`.
        balls: Vec<u64>,
    },
    Rejected {
        witness: (Element, Element, Element),
        left: Element,
        right: Element,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixture {
    pub name: &'static str,
    pub spec: SemigroupSpec,
    pub expected: Option<Expected>,
}

fn el(g: u16, e: u64) -> Element {
    Element::new(Gen(g), e)
}

fn reflexive(n: u16) -> impl Iterator<Item = (Gen, Gen, Rational)> {
    (0..n).map(|g| (Gen(g), Gen(g), Rational::ONE))
}

fn sorted_edges(mut edges: Vec<(Gen, Gen, Rational)>) -> Vec<(Gen, Gen, Rational)> {
    edges.sort();
    edges
}

fn linear(slope: u64, offset: i64) -> Vec<u64> {
    (1..=12).map(|m| (slope as i64 * m + offset) as u64).collect()
}

pub fn get_fixture(name: &str) -> Result<Fixture> {
    let one = Rational::ONE;
    let (src, expected) = match name {
        "fold" => (
            "ab; ab=a^2, ba=a^2",
            Expected::Accepted {
                edges: sorted_edges(reflexive(2).chain([(Gen(1), Gen(0), one)]).collect()),
                d: vec![1, 1],
                k: 1,
                l: Rational::integer(2),
                balls: linear(2, 0),
            },
        ),
        "shift2" => (
            "ab; ab=a^3, ba=a^3",
            Expected::Accepted {
                edges: sorted_edges(reflexive(2).chain([(Gen(1), Gen(0), Rational::integer(2))]).collect()),
                d: vec![1, 2],
                k: 2,
                l: Rational::new(3, 2),
                balls: linear(3, -1),
            },
        ),
        // w = last letter ^ |w|, so x·y^i never leaves ⟨y⟩
        "swap" => (
            "ab; ab=b^2, ba=a^2",
            Expected::Accepted {
                edges: reflexive(2).collect(),
                d: vec![1, 1],
                k: 1,
                l: Rational::integer(2),
                balls: linear(2, 0),
            },
        ),
        "cascade3" => (
            "abc; ab=a^2, ba=a^2, ac=a^2, ca=a^2, bc=b^2, cb=b^2",
            Expected::Accepted {
                edges: sorted_edges(
                    reflexive(3)
                        .chain([(Gen(1), Gen(0), one), (Gen(2), Gen(0), one), (Gen(2), Gen(1), one)])
                        .collect(),
                ),
                d: vec![1, 1, 1],
                k: 1,
                l: Rational::integer(3),
                balls: linear(3, 0),
            },
        ),
        "nonassoc" => (
            "ab; ab=b^2, ba=a^3",
            Expected::Rejected {
                witness: (el(0, 1), el(1, 1), el(0, 1)),
                left: el(0, 5),
                right: el(0, 4),
            },
        ),
        _ => return Err(Error::UnknownFixture(name.to_string())),
    };
    let name = FIXTURE_NAMES
        .iter()
        .copied()
        .find(|n| *n == name)
        .expect("matched above");
    Ok(Fixture {
        name,
        spec: SemigroupSpec::parse_compact(src).expect("fixture tables are well formed"),
        expected: Some(expected),
    })
}

pub fn all_fixtures() -> Vec<Fixture> {
    FIXTURE_NAMES
        .iter()
        .map(|n| get_fixture(n).expect("known fixture"))
        .collect()
}

/// Key identifying a table up to generator renaming and reversal: the
/// lexicographically smallest row-major encoding over all variants.
pub fn canonical_key(spec: &SemigroupSpec) -> Vec<(u16, u64)> {
    let n = spec.len();
    let mut best: Option<Vec<(u16, u64)>> = None;
    for variant in [spec.clone(), spec.reversed()] {
        for perm in permutations(n) {
            // perm maps old index -> new index
            let mut inv = vec![0; n];
            for (old, &new) in perm.iter().enumerate() {
                inv[new] = old;
            }
            let mut enc = Vec::with_capacity(n * (n - 1));
            for nx in 0..n {
                for ny in (0..n).filter(|&ny| ny != nx) {
                    let e = variant.product(Gen(inv[nx] as u16), Gen(inv[ny] as u16));
                    enc.push((perm[e.gen.index()] as u16, e.exp));
                }
            }
            if best.as_ref().is_none_or(|b| enc < *b) {
                best = Some(enc);
            }
        }
    }
    best.unwrap_or_default()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchParams {
    pub alphabet_size: usize,
    pub max_result_exp: u64,
    pub window: u64,
    /// Ball radius used when certifying survivors.
    pub m_max: u64,
    pub candidate_cap: u128,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            alphabet_size: 2,
            max_result_exp: 2,
            window: 6,
            m_max: 8,
            candidate_cap: 2_000_000,
        }
    }
}

/// Pipeline outcome for one survivor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SurvivorSummary {
    Certified {
        edges: Vec<(Gen, Gen, Rational)>,
        d: Vec<u64>,
        k: u64,
        l: Rational,
        counts: Vec<u64>,
    },
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Survivor {
    pub spec: SemigroupSpec,
    pub key: Vec<(u16, u64)>,
    pub summary: SurvivorSummary,
}

const NAMES: [&str; 3] = ["a", "b", "c"];

fn decode(n: usize, max_exp: u64, mut code: u128) -> SemigroupSpec {
    let base = n as u128 * max_exp as u128;
    let mut products = Vec::with_capacity(n * (n - 1));
    for x in 0..n {
        for y in (0..n).filter(|&y| y != x) {
            let digit = (code % base) as u64;
            code /= base;
            let gen = Gen((digit / max_exp) as u16);
            let exp = digit % max_exp + 1;
            products.push((Gen(x as u16), Gen(y as u16), Element { gen, exp }));
        }
    }
    SemigroupSpec::new(&NAMES[..n], &products).expect("decoded tables are total")
}

/// Window check that stops at the first failure, smallest exponents first.
fn passes_window(engine: &Engine, window: u64) -> bool {
    let mut elems: Vec<Element> = engine
        .spec()
        .gens()
        .flat_map(|g| (1..=window).map(move |e| Element { gen: g, exp: e }))
        .collect();
    elems.sort_by_key(|e| (e.exp, e.gen));
    for &u in &elems {
        for &v in &elems {
            let Ok(uv) = engine.mul(u, v) else { return false };
            if uv.gen == u.gen && uv.exp < u.exp {
                return false;
            }
            for &w in &elems {
                let left = engine.mul(uv, w);
                let right = engine.mul(v, w).and_then(|vw| engine.mul(u, vw));
                match (left, right) {
                    (Ok(l), Ok(r)) if l == r => {}
                    _ => return false,
                }
            }
        }
    }
    true
}

/// Enumerates every table with result exponents `<= max_result_exp`, keeps
/// those passing the window checks, deduplicates up to renaming and
/// reversal, and runs the full pipeline on each survivor.
pub fn search_fixtures(params: &SearchParams, exec: Exec) -> Result<Vec<Survivor>> {
    let n = params.alphabet_size;
    if !(2..=3).contains(&n) {
        return Err(Error::InvalidParameter(format!("alphabet size {n} not in 2..=3")));
    }
    if !(1..=3).contains(&params.max_result_exp) {
        return Err(Error::InvalidParameter(format!(
            "max result exponent {} not in 1..=3",
            params.max_result_exp
        )));
    }
    let base = n as u128 * params.max_result_exp as u128;
    let candidates = base.pow((n * (n - 1)) as u32);
    if candidates > params.candidate_cap {
        return Err(Error::SearchTooLarge {
            candidates,
            cap: params.candidate_cap,
        });
    }
    let cfg = Config {
        window: params.window,
        m_max: params.m_max,
        ..Config::default()
    };
    let kept = exec.map_range(candidates as usize, |code| {
        let spec = decode(n, params.max_result_exp, code as u128);
        let key = canonical_key(&spec);
        let engine = cfg.engine(spec.clone());
        if !passes_window(&engine, params.window) {
            return None;
        }
        Some((key, spec))
    });
    let mut survivors: Vec<(Vec<(u16, u64)>, SemigroupSpec)> = kept.into_iter().flatten().collect();
    survivors.sort_by(|a, b| a.0.cmp(&b.0));
    survivors.dedup_by(|a, b| a.0 == b.0);

    Ok(exec.map(&survivors, |(key, spec)| {
        let engine = cfg.engine(spec.clone());
        let summary = match run_all(&engine, &cfg) {
            Ok((analysis, cert)) => SurvivorSummary::Certified {
                edges: analysis.graph.edges.iter().map(|(&(y, z), e)| (y, z, e.m)).collect(),
                d: cert.d.d.clone(),
                k: cert.k.k,
                l: cert.l,
                counts: cert.balls.iter().map(|r| r.count).collect(),
            },
            Err(e) => SurvivorSummary::Failed(e.to_string()),
        };
        // store the canonical representative, not the first decoded variant
        Survivor {
            spec: spec_from_key(n, key),
            key: key.clone(),
            summary,
        }
    }))
}

fn spec_from_key(n: usize, key: &[(u16, u64)]) -> SemigroupSpec {
    let mut products = Vec::with_capacity(key.len());
    let mut it = key.iter();
    for x in 0..n {
        for y in (0..n).filter(|&y| y != x) {
            let &(g, e) = it.next().expect("key covers every pair");
            products.push((Gen(x as u16), Gen(y as u16), Element { gen: Gen(g), exp: e }));
        }
    }
    SemigroupSpec::new(&NAMES[..n], &products).expect("canonical key is a total table")
}
