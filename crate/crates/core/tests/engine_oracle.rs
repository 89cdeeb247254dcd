mod common;

use common::{all_words, oracle_mul, oracle_word, spec, POSITIVE};
use monounion::engine::DEFAULT_DEPTH_BOUND;
use monounion::validate::check_exponent_monotonicity;
use monounion::{Element, Engine, Gen};
use proptest::prelude::*;

const A: Gen = Gen(0);
const B: Gen = Gen(1);

/// All values any parenthesization of `word` can take, by interval DP.
fn parenthesization_values(engine: &Engine, word: &[Gen]) -> Vec<Vec<Vec<Element>>> {
    let n = word.len();
    let mut table = vec![vec![Vec::new(); n]; n];
    for (i, &g) in word.iter().enumerate() {
        table[i][i] = vec![Element::generator(g)];
    }
    for len in 2..=n {
        for i in 0..=n - len {
            let j = i + len - 1;
            let mut vals = Vec::new();
            for k in i..j {
                for &l in &table[i][k] {
                    for &r in &table[k + 1][j] {
                        vals.push(engine.mul(l, r).unwrap());
                    }
                }
            }
            vals.sort();
            vals.dedup();
            table[i][j] = vals;
        }
    }
    table
}

#[test]
fn spec_examples_match_the_oracle() {
    let fold = spec(POSITIVE[0].1);
    let shift = spec(POSITIVE[1].1);
    let e = Engine::new(fold.clone());
    let cases = [
        (Element::new(A, 2), Element::new(B, 3)),
        (Element::new(A, 3), Element::new(A, 4)),
    ];
    for (x, y) in cases {
        assert_eq!(e.mul(x, y).unwrap(), oracle_mul(&fold, x, y));
    }
    assert_eq!(
        e.mul(Element::new(A, 2), Element::new(B, 3)).unwrap(),
        Element::new(A, 5)
    );
    let s = Engine::new(shift.clone());
    let (x, y) = (Element::new(B, 2), Element::new(A, 1));
    assert_eq!(oracle_mul(&shift, x, y), Element::new(A, 5));
    assert_eq!(s.mul(x, y).unwrap(), Element::new(A, 5));
    assert_eq!(oracle_word(&shift, &[B, A, B]), Element::new(A, 5));
}

#[test]
fn every_parenthesization_agrees_with_the_word_fold() {
    for (name, src) in POSITIVE {
        let sp = spec(src);
        let engine = Engine::new(sp.clone());
        for word in all_words(sp.len(), 6) {
            let expected = oracle_word(&sp, &word);
            assert_eq!(engine.reduce_word(&word).unwrap(), expected, "{name} {word:?}");
            let vals = parenthesization_values(&engine, &word);
            assert_eq!(vals[0][word.len() - 1], vec![expected], "{name} {word:?}");
        }
    }
}

#[test]
fn nonassoc_has_two_values_on_aba() {
    let engine = Engine::new(spec("ab; ab=b^2, ba=a^3"));
    let vals = parenthesization_values(&engine, &[A, B, A]);
    assert_eq!(vals[0][2], vec![Element::new(A, 4), Element::new(A, 5)]);
}

#[test]
fn monotonicity_holds_on_positive_fixtures() {
    for (name, src) in POSITIVE {
        let r = check_exponent_monotonicity(&Engine::new(spec(src)), 8);
        assert!(r.accepted(), "{name}");
    }
}

fn fixture_index() -> impl Strategy<Value = usize> {
    0..POSITIVE.len()
}

fn element_in(n: usize) -> impl Strategy<Value = Element> {
    (0..n as u16, 1u64..40).prop_map(|(g, e)| Element::new(Gen(g), e))
}

proptest! {
    #[test]
    fn same_base_additivity(g in 0u16..3, m in 1u64..(1 << 62), n in 1u64..(1 << 62)) {
        let engine = Engine::new(spec(POSITIVE[3].1));
        prop_assert_eq!(
            engine.mul(Element::new(Gen(g), m), Element::new(Gen(g), n)).unwrap(),
            Element::new(Gen(g), m + n)
        );
    }

    #[test]
    fn products_stay_in_the_alphabet(f in fixture_index(), seed in prop::collection::vec((0u16..3, 1u64..40), 2)) {
        let sp = spec(POSITIVE[f].1);
        let n = sp.len() as u16;
        let x = Element::new(Gen(seed[0].0 % n), seed[0].1);
        let y = Element::new(Gen(seed[1].0 % n), seed[1].1);
        let r = Engine::new(sp.clone()).mul(x, y).unwrap();
        prop_assert!(sp.contains(r));
        prop_assert_eq!(r, oracle_mul(&sp, x, y));
    }

    #[test]
    fn memo_state_is_unobservable(f in fixture_index(), xs in prop::collection::vec(element_in(2), 1..20)) {
        let sp = spec(POSITIVE[f].1);
        let warm = Engine::new(sp.clone());
        let cold = Engine::unmemoized(sp, DEFAULT_DEPTH_BOUND);
        for pair in xs.windows(2) {
            let first = warm.mul(pair[0], pair[1]);
            prop_assert_eq!(first, cold.mul(pair[0], pair[1]));
            prop_assert_eq!(first, warm.mul(pair[0], pair[1]));
        }
    }

    #[test]
    fn random_parenthesizations_match(f in fixture_index(), word in prop::collection::vec(0u16..3, 1..10), cuts in prop::collection::vec(any::<usize>(), 10)) {
        let sp = spec(POSITIVE[f].1);
        let n = sp.len() as u16;
        let word: Vec<Gen> = word.into_iter().map(|g| Gen(g % n)).collect();
        let engine = Engine::new(sp.clone());
        // random binary tree built by splitting at pseudo-random points
        fn eval(engine: &Engine, w: &[Gen], cuts: &[usize], depth: usize) -> Element {
            if w.len() == 1 {
                return Element::generator(w[0]);
            }
            let k = 1 + cuts[depth % cuts.len()] % (w.len() - 1);
            let l = eval(engine, &w[..k], cuts, depth + 1);
            let r = eval(engine, &w[k..], cuts, depth + 2);
            engine.mul(l, r).unwrap()
        }
        prop_assert_eq!(eval(&engine, &word, &cuts, 0), oracle_word(&sp, &word));
    }
}
