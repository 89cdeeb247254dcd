//! Weight functions `d` with `d(y) >= d(z)·M(y, z)` on every persistence edge.
//!
//! Classes of mutually persistent generators are weighted internally by
//! `d(b) = M(b, a)` for a fixed base `a`, then whole classes are scaled by
//! the least integer that dominates every edge into classes already
//! weighted. Classes are visited sinks first.

use std::collections::BTreeSet;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::persistence::PersistenceGraph;
use crate::rational::Rational;
use crate::semigroup::{Element, Gen};

/// Mutual-reachability classes of the persistence relation and their DAG.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condensation {
    /// Each class sorted ascending; classes ordered by smallest member.
    pub classes: Vec<Vec<Gen>>,
    pub class_of: Vec<usize>,
    pub dag_edges: BTreeSet<(usize, usize)>,
    pub sinks: Vec<usize>,
    /// Reverse topological order: every class appears after all classes it reaches.
    pub topo_order: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightAssignment {
    pub d: Vec<u64>,
}

impl WeightAssignment {
    pub fn get(&self, g: Gen) -> u64 {
        self.d[g.index()]
    }

    /// `d(x^i) = d(x)·i`.
    pub fn extend(&self, e: Element) -> Result<u64> {
        self.get(e.gen).checked_mul(e.exp).ok_or(Error::ArithmeticOverflow)
    }
}

/// Tarjan's algorithm, iterative. Components come out sinks first.
fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut next)) = call.last_mut() {
            if let Some(&w) = adj[v].get(*next) {
                *next += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comps.push(comp);
            }
        }
    }
    comps
}

/// Condenses the persistence graph and checks the intra-class identity
/// `M(x, y)·M(y, x) = 1`.
pub fn condense(graph: &PersistenceGraph) -> Result<Condensation> {
    let n = graph.size;
    let mut adj = vec![Vec::new(); n];
    for &(y, z) in graph.edges.keys() {
        if y != z {
            adj[y.index()].push(z.index());
        }
    }
    let mut classes: Vec<Vec<Gen>> = tarjan(&adj)
        .into_iter()
        .map(|c| {
            let mut c: Vec<Gen> = c.into_iter().map(|i| Gen(i as u16)).collect();
            c.sort();
            c
        })
        .collect();
    classes.sort();
    let mut class_of = vec![0; n];
    for (ci, class) in classes.iter().enumerate() {
        for g in class {
            class_of[g.index()] = ci;
        }
    }

    for class in &classes {
        for &x in class {
            for &y in class {
                let (Some(mxy), Some(myx)) = (graph.m(x, y), graph.m(y, x)) else {
                    return Err(Error::IntraClassInconsistency { x, y });
                };
                if mxy.checked_mul(myx)? != Rational::ONE {
                    return Err(Error::IntraClassInconsistency { x, y });
                }
            }
        }
    }

    let mut dag_edges = BTreeSet::new();
    for &(y, z) in graph.edges.keys() {
        let (cy, cz) = (class_of[y.index()], class_of[z.index()]);
        if cy != cz {
            dag_edges.insert((cy, cz));
        }
    }
    let sinks: Vec<usize> = (0..classes.len())
        .filter(|&c| !dag_edges.iter().any(|&(from, _)| from == c))
        .collect();

    // smallest ready class first, for a reproducible order
    let mut topo_order = Vec::with_capacity(classes.len());
    let mut done = vec![false; classes.len()];
    while topo_order.len() < classes.len() {
        let next = (0..classes.len())
            .find(|&c| {
                !done[c]
                    && dag_edges
                        .iter()
                        .filter(|&&(from, _)| from == c)
                        .all(|&(_, to)| done[to])
            })
            .expect("condensation is acyclic");
        done[next] = true;
        topo_order.push(next);
    }

    Ok(Condensation {
        classes,
        class_of,
        dag_edges,
        sinks,
        topo_order,
    })
}

/// Builds a positive-integer weight function satisfying the edge inequality.
pub fn synthesize_weights(cond: &Condensation, graph: &PersistenceGraph) -> Result<WeightAssignment> {
    let mut d = vec![0u64; graph.size];
    for &ci in &cond.topo_order {
        let class = &cond.classes[ci];
        let base = class[0];
        let raw: Vec<Rational> = class
            .iter()
            .map(|&b| graph.m(b, base).ok_or(Error::IntraClassInconsistency { x: b, y: base }))
            .collect::<Result<_>>()?;
        let lcm = raw.iter().fold(1i128, |acc, r| acc.lcm(&r.denom()));
        let ints: Vec<i128> = raw
            .iter()
            .map(|r| r.checked_mul(Rational::integer(lcm)).map(|v| v.numer()))
            .collect::<Result<_>>()?;

        let mut lambda: i128 = 1;
        for (&y, &dy) in class.iter().zip(&ints) {
            for (z, edge) in graph.successors(y) {
                if cond.class_of[z.index()] == ci {
                    continue;
                }
                let need = Rational::integer(d[z.index()] as i128).checked_mul(edge.m)?;
                let ratio = need.checked_mul(Rational::new(1, dy))?;
                lambda = lambda.max(ratio.ceil());
            }
        }
        for (&y, &dy) in class.iter().zip(&ints) {
            let w = dy.checked_mul(lambda).ok_or(Error::ArithmeticOverflow)?;
            d[y.index()] = u64::try_from(w).map_err(|_| Error::ArithmeticOverflow)?;
        }
    }
    Ok(WeightAssignment { d })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightViolation {
    /// `d(y) < d(z)·M(y, z)`.
    Inequality {
        y: Gen,
        z: Gen,
        dy: u64,
        bound: Rational,
    },
    /// Mutually persistent pair with `d(y) != d(z)·M(y, z)`.
    IntraClass {
        y: Gen,
        z: Gen,
        dy: u64,
        expected: Rational,
    },
    NonPositive {
        g: Gen,
    },
}

/// Re-checks every edge inequality and the intra-class equalities exactly.
pub fn verify_weights(graph: &PersistenceGraph, d: &WeightAssignment) -> Result<Vec<WeightViolation>> {
    let mut out = Vec::new();
    for g in graph.gens() {
        if d.get(g) == 0 {
            out.push(WeightViolation::NonPositive { g });
        }
    }
    for (&(y, z), edge) in &graph.edges {
        let dy = d.get(y);
        let bound = Rational::integer(d.get(z) as i128).checked_mul(edge.m)?;
        if bound.cmp_int(dy as i128).is_gt() {
            out.push(WeightViolation::Inequality { y, z, dy, bound });
        }
        if y != z && graph.edge(z, y).is_some() && !bound.cmp_int(dy as i128).is_eq() {
            out.push(WeightViolation::IntraClass {
                y,
                z,
                dy,
                expected: bound,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::{Edge, Return};
    use std::collections::BTreeMap;

    fn graph(size: usize, edges: &[(u16, u16, Rational)]) -> PersistenceGraph {
        let mut map = BTreeMap::new();
        for g in 0..size as u16 {
            map.insert(
                (Gen(g), Gen(g)),
                Edge {
                    m: Rational::ONE,
                    witness: Return {
                        y: Gen(g),
                        z: Gen(g),
                        t: 1,
                        q: 1,
                        s: 2,
                    },
                },
            );
        }
        for &(y, z, m) in edges {
            map.insert(
                (Gen(y), Gen(z)),
                Edge {
                    m,
                    witness: Return {
                        y: Gen(y),
                        z: Gen(z),
                        t: 1,
                        q: 1,
                        s: 1,
                    },
                },
            );
        }
        PersistenceGraph { size, edges: map }
    }

    #[test]
    fn shift2_condensation_and_weights() {
        let g = graph(2, &[(1, 0, Rational::integer(2))]);
        let c = condense(&g).unwrap();
        assert_eq!(c.classes, vec![vec![Gen(0)], vec![Gen(1)]]);
        assert_eq!(c.dag_edges.iter().copied().collect::<Vec<_>>(), vec![(1, 0)]);
        assert_eq!(c.sinks, vec![0]);
        assert_eq!(c.topo_order, vec![0, 1]);
        let d = synthesize_weights(&c, &g).unwrap();
        assert_eq!(d.d, vec![1, 2]);
        assert!(verify_weights(&g, &d).unwrap().is_empty());
    }

    #[test]
    fn adversarial_weights_rejected() {
        let g = graph(2, &[(1, 0, Rational::integer(2))]);
        let v = verify_weights(&g, &WeightAssignment { d: vec![1, 1] }).unwrap();
        assert_eq!(
            v,
            vec![WeightViolation::Inequality {
                y: Gen(1),
                z: Gen(0),
                dy: 1,
                bound: Rational::integer(2)
            }]
        );
    }

    #[test]
    fn single_generator() {
        let g = graph(1, &[]);
        let c = condense(&g).unwrap();
        assert_eq!(c.sinks, vec![0]);
        assert_eq!(synthesize_weights(&c, &g).unwrap().d, vec![1]);
    }

    #[test]
    fn cascade_order_has_sink_first() {
        let one = Rational::ONE;
        let g = graph(3, &[(1, 0, one), (2, 1, one), (2, 0, one)]);
        let c = condense(&g).unwrap();
        assert_eq!(c.classes.len(), 3);
        assert_eq!(
            c.dag_edges.iter().copied().collect::<Vec<_>>(),
            vec![(1, 0), (2, 0), (2, 1)]
        );
        assert_eq!(c.sinks, vec![0]);
        assert_eq!(c.topo_order, vec![0, 1, 2]);
        assert_eq!(synthesize_weights(&c, &g).unwrap().d, vec![1, 1, 1]);
    }

    #[test]
    fn rational_class_clears_denominators() {
        // a <-> b with M(a,b) = 2, M(b,a) = 1/2; c -> a with M = 3
        let g = graph(
            3,
            &[
                (0, 1, Rational::integer(2)),
                (1, 0, Rational::new(1, 2)),
                (2, 0, Rational::integer(3)),
                (2, 1, Rational::integer(6)),
            ],
        );
        let c = condense(&g).unwrap();
        assert_eq!(c.classes[0], vec![Gen(0), Gen(1)]);
        let d = synthesize_weights(&c, &g).unwrap();
        // raw (1, 1/2) -> (2, 1); c: raw 1, needs max(2·3, 1·6) = 6
        assert_eq!(d.d, vec![2, 1, 6]);
        assert!(verify_weights(&g, &d).unwrap().is_empty());
    }

    #[test]
    fn broken_class_identity_is_fatal() {
        let g = graph(2, &[(0, 1, Rational::integer(2)), (1, 0, Rational::integer(2))]);
        assert!(matches!(condense(&g), Err(Error::IntraClassInconsistency { .. })));
    }

    #[test]
    fn zero_multiplier_edge_needs_no_scaling() {
        let g = graph(2, &[(1, 0, Rational::ZERO)]);
        let c = condense(&g).unwrap();
        assert_eq!(synthesize_weights(&c, &g).unwrap().d, vec![1, 1]);
    }

    #[test]
    fn extend_multiplies_by_exponent() {
        let d = WeightAssignment { d: vec![1, 2] };
        assert_eq!(d.extend(Element::new(Gen(0), 5)).unwrap(), 5);
        assert_eq!(d.extend(Element::new(Gen(1), 3)).unwrap(), 6);
        assert_eq!(d.extend(Element::new(Gen(1), 1)).unwrap(), 2);
        assert!(d.extend(Element::new(Gen(1), u64::MAX)).is_err());
    }

    #[test]
    fn tarjan_finds_cycles() {
        let comps = tarjan(&[vec![1], vec![2], vec![0, 3], vec![]]);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0], vec![3]);
    }
}
