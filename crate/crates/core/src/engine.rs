//! The multiplication engine.
//!
//! A product `e1 · y^k` with `e1 = z^p`, `z != y`, is reduced one letter at a
//! time. A single step `z^p · y` is `table(z, y)` when `p = 1` and
//! `z^(p-1) · table(z, y)` otherwise. The mutual recursion is run on an
//! explicit work stack so deep reductions cannot overflow the call stack.
//!
//! Every top-level product gets a budget of `depth_bound` single-letter
//! steps. Memoized steps carry their recorded step cost, so the budget is
//! charged identically whether or not the memo was warm.

use dashmap::DashMap;

use crate::error::ReduceError;
use crate::semigroup::{Element, Gen, SemigroupSpec};

pub const DEFAULT_DEPTH_BOUND: u64 = 10_000;

type StepKey = (Gen, u64, Gen);

enum Task {
    Letters(Gen, u64),
    Record { key: StepKey, start: u64 },
}

#[derive(Debug)]
pub struct Engine {
    spec: SemigroupSpec,
    depth_bound: u64,
    memo: Option<DashMap<StepKey, (Element, u64)>>,
}

impl Engine {
    pub fn new(spec: SemigroupSpec) -> Self {
        Self::with_depth_bound(spec, DEFAULT_DEPTH_BOUND)
    }

    pub fn with_depth_bound(spec: SemigroupSpec, depth_bound: u64) -> Self {
        Engine {
            spec,
            depth_bound: depth_bound.max(1),
            memo: Some(DashMap::new()),
        }
    }

    /// An engine that recomputes every step; used to check memo transparency.
    pub fn unmemoized(spec: SemigroupSpec, depth_bound: u64) -> Self {
        Engine {
            spec,
            depth_bound: depth_bound.max(1),
            memo: None,
        }
    }

    pub fn spec(&self) -> &SemigroupSpec {
        &self.spec
    }

    pub fn depth_bound(&self) -> u64 {
        self.depth_bound
    }

    pub fn memo_len(&self) -> usize {
        self.memo.as_ref().map_or(0, DashMap::len)
    }

    /// `e1 · e2`.
    pub fn mul(&self, e1: Element, e2: Element) -> Result<Element, ReduceError> {
        self.mul_pow(e1, e2.gen, e2.exp)
    }

    /// `e · y^k` for `k >= 1`.
    pub fn mul_pow(&self, e: Element, y: Gen, k: u64) -> Result<Element, ReduceError> {
        debug_assert!(self.spec.contains(e) && y.index() < self.spec.len());
        if e.gen == y {
            return add_exp(e, k);
        }
        self.reduce(e, vec![Task::Letters(y, k)])
    }

    /// `e · y`.
    pub fn right_mul_gen(&self, e: Element, y: Gen) -> Result<Element, ReduceError> {
        self.mul_pow(e, y, 1)
    }

    /// Left-to-right fold of a nonempty word by [`Engine::right_mul_gen`].
    ///
    /// Each letter is its own top-level product.
    pub fn reduce_word(&self, word: &[Gen]) -> Result<Element, ReduceError> {
        let (&first, rest) = word.split_first().expect("word must be nonempty");
        rest.iter()
            .try_fold(Element::generator(first), |acc, &y| self.right_mul_gen(acc, y))
    }

    fn reduce(&self, mut acc: Element, mut stack: Vec<Task>) -> Result<Element, ReduceError> {
        let mut steps: u64 = 0;
        while let Some(task) = stack.pop() {
            match task {
                Task::Record { key, start } => {
                    if let Some(memo) = &self.memo {
                        memo.insert(key, (acc, steps - start));
                    }
                }
                Task::Letters(g, count) => {
                    if acc.gen == g {
                        acc = add_exp(acc, count)?;
                        continue;
                    }
                    if count > 1 {
                        stack.push(Task::Letters(g, count - 1));
                    }
                    let start = steps;
                    steps += 1;
                    if steps > self.depth_bound {
                        return Err(ReduceError::DepthExceeded {
                            bound: self.depth_bound,
                        });
                    }
                    let t = self.spec.product(acc.gen, g);
                    if acc.exp == 1 {
                        acc = t;
                        continue;
                    }
                    let key = (acc.gen, acc.exp, g);
                    if let Some(memo) = &self.memo {
                        if let Some(hit) = memo.get(&key) {
                            let (value, cost) = *hit;
                            steps = start + cost;
                            if steps > self.depth_bound {
                                return Err(ReduceError::DepthExceeded {
                                    bound: self.depth_bound,
                                });
                            }
                            acc = value;
                            continue;
                        }
                        stack.push(Task::Record { key, start });
                    }
                    acc = Element {
                        gen: acc.gen,
                        exp: acc.exp - 1,
                    };
                    stack.push(Task::Letters(t.gen, t.exp));
                }
            }
        }
        Ok(acc)
    }
}

fn add_exp(e: Element, k: u64) -> Result<Element, ReduceError> {
    e.exp
        .checked_add(k)
        .map(|exp| Element { gen: e.gen, exp })
        .ok_or(ReduceError::ExponentOverflow)
}
