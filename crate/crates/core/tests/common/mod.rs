//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use monounion::{Element, Gen, SemigroupSpec};

/// Direct transcription of the recursive product definition: `e1` times
/// `e2.gen`, one letter at a time; `z^p·y = z^(p-1)·table(z, y)`.
pub fn oracle_mul(spec: &SemigroupSpec, e1: Element, e2: Element) -> Element {
    if e1.gen == e2.gen {
        return Element::new(e1.gen, e1.exp + e2.exp);
    }
    let mut acc = e1;
    for _ in 0..e2.exp {
        acc = oracle_step(spec, acc, e2.gen);
    }
    acc
}

pub fn oracle_step(spec: &SemigroupSpec, e: Element, y: Gen) -> Element {
    if e.gen == y {
        Element::new(y, e.exp + 1)
    } else if e.exp == 1 {
        spec.product(e.gen, y)
    } else {
        oracle_mul(spec, Element::new(e.gen, e.exp - 1), spec.product(e.gen, y))
    }
}

pub fn oracle_word(spec: &SemigroupSpec, word: &[Gen]) -> Element {
    let mut acc = Element::generator(word[0]);
    for &y in &word[1..] {
        acc = oracle_step(spec, acc, y);
    }
    acc
}

/// Every word over the alphabet with length in `1..=max_len`.
pub fn all_words(n: usize, max_len: usize) -> Vec<Vec<Gen>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Gen>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for g in 0..n {
                let mut v = w.clone();
                v.push(Gen(g as u16));
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// `J(m)` by reducing every word of length `<= m`.
pub fn brute_ball(spec: &SemigroupSpec, m: usize) -> BTreeSet<Element> {
    all_words(spec.len(), m).iter().map(|w| oracle_word(spec, w)).collect()
}

/// Positive fixtures as compact table strings.
pub const POSITIVE: [(&str, &str); 4] = [
    ("fold", "ab; ab=a^2, ba=a^2"),
    ("shift2", "ab; ab=a^3, ba=a^3"),
    ("swap", "ab; ab=b^2, ba=a^2"),
    ("cascade3", "abc; ab=a^2, ba=a^2, ac=a^2, ca=a^2, bc=b^2, cb=b^2"),
];

pub fn spec(src: &str) -> SemigroupSpec {
    SemigroupSpec::parse_compact(src).unwrap()
}
