//! Elements and pair-table presentations.
//!
//! Every element of a union of free monogenic semigroups is a power `z^n`
//! of exactly one generator, so a presentation only needs the products
//! `x·y = z^k` for ordered pairs of distinct generators. Same-generator
//! products are implicit: `x^m · x^n = x^(m+n)`.

use std::fmt;

use crate::error::SpecError;

/// Index of a generator in the alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gen(pub u16);

impl Gen {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A power `gen^exp` with `exp >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element {
    pub gen: Gen,
    pub exp: u64,
}

impl Element {
    /// Panics if `exp == 0`; the free monogenic semigroup has no identity.
    pub fn new(gen: Gen, exp: u64) -> Self {
        assert!(exp >= 1, "element exponent must be positive");
        Element { gen, exp }
    }

    pub fn generator(gen: Gen) -> Self {
        Element { gen, exp: 1 }
    }
}

/// Display helper that renders an element with the spec's generator names.
pub struct Named<'a> {
    spec: &'a SemigroupSpec,
    element: Element,
}

impl fmt::Display for Named<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.spec.name(self.element.gen), self.element.exp)
    }
}

/// Alphabet plus the product table for distinct generator pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupSpec {
    names: Vec<String>,
    // row-major, indexed by `x * n + y`; diagonal entries are unused
    table: Vec<Element>,
}

impl SemigroupSpec {
    /// Builds a spec from generator names and `(left, right, result)` records.
    ///
    /// Requires exactly one record per ordered pair of distinct generators.
    pub fn new<S: AsRef<str>>(names: &[S], products: &[(Gen, Gen, Element)]) -> Result<Self, SpecError> {
        if names.is_empty() {
            return Err(SpecError::EmptyAlphabet);
        }
        if names.len() > u16::MAX as usize {
            return Err(SpecError::AlphabetTooLarge(names.len()));
        }
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.chars().any(char::is_whitespace) {
                return Err(SpecError::InvalidName(name.clone()));
            }
            if names[..i].contains(name) {
                return Err(SpecError::DuplicateName(name.clone()));
            }
        }
        let n = names.len();
        let mut table: Vec<Option<Element>> = vec![None; n * n];
        for &(x, y, result) in products {
            for g in [x, y, result.gen] {
                if g.index() >= n {
                    return Err(SpecError::UnknownGenerator(g.0));
                }
            }
            if x == y {
                return Err(SpecError::SameGeneratorProduct(names[x.index()].clone()));
            }
            if result.exp == 0 {
                return Err(SpecError::ZeroExponent {
                    left: names[x.index()].clone(),
                    right: names[y.index()].clone(),
                });
            }
            let slot = &mut table[x.index() * n + y.index()];
            if slot.is_some() {
                return Err(SpecError::DuplicateProduct {
                    left: names[x.index()].clone(),
                    right: names[y.index()].clone(),
                });
            }
            *slot = Some(result);
        }
        let mut filled = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                match table[x * n + y] {
                    Some(e) => filled.push(e),
                    None if x == y => filled.push(Element::generator(Gen(x as u16))),
                    None => {
                        return Err(SpecError::MissingProduct {
                            left: names[x].clone(),
                            right: names[y].clone(),
                        })
                    }
                }
            }
        }
        Ok(SemigroupSpec { names, table: filled })
    }

    /// Parses the compact notation used in tests and the CLI, e.g.
    /// `"a b; ab=a^2, ba=a^2"`. An alphabet of single-character names may
    /// be written without spaces.
    pub fn parse_compact(src: &str) -> Result<Self, SpecError> {
        let (alpha, rules) = src.split_once(';').unwrap_or((src, ""));
        let names: Vec<String> = if alpha.trim().contains(char::is_whitespace) {
            alpha.split_whitespace().map(str::to_string).collect()
        } else {
            alpha.trim().chars().map(|c| c.to_string()).collect()
        };
        let lookup = |s: &str| -> Result<Gen, SpecError> {
            names
                .iter()
                .position(|n| n == s)
                .map(|i| Gen(i as u16))
                .ok_or_else(|| SpecError::Malformed(format!("unknown generator `{s}`")))
        };
        let mut products = Vec::new();
        for rule in rules.split(',').map(str::trim).filter(|r| !r.is_empty()) {
            let (lhs, rhs) = rule
                .split_once('=')
                .ok_or_else(|| SpecError::Malformed(format!("missing `=` in `{rule}`")))?;
            let lhs: Vec<char> = lhs.trim().chars().collect();
            if lhs.len() != 2 {
                return Err(SpecError::Malformed(format!(
                    "left side of `{rule}` must be two single-character generators"
                )));
            }
            let (base, exp) = match rhs.trim().split_once('^') {
                Some((b, e)) => (
                    b.trim(),
                    e.trim()
                        .parse::<u64>()
                        .map_err(|_| SpecError::Malformed(format!("bad exponent in `{rule}`")))?,
                ),
                None => (rhs.trim(), 1),
            };
            let x = lookup(&lhs[0].to_string())?;
            let y = lookup(&lhs[1].to_string())?;
            let z = lookup(base)?;
            products.push((x, y, Element { gen: z, exp }));
        }
        SemigroupSpec::new(&names, &products)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, g: Gen) -> &str {
        &self.names[g.index()]
    }

    pub fn gen_by_name(&self, name: &str) -> Option<Gen> {
        self.names.iter().position(|n| n == name).map(|i| Gen(i as u16))
    }

    /// Generators in alphabet order.
    pub fn gens(&self) -> impl Iterator<Item = Gen> + Clone {
        (0..self.names.len() as u16).map(Gen)
    }

    /// The table entry `x·y` for `x != y`.
    pub fn product(&self, x: Gen, y: Gen) -> Element {
        debug_assert_ne!(x, y);
        self.table[x.index() * self.names.len() + y.index()]
    }

    /// Table records for distinct ordered pairs, in alphabet order.
    pub fn products(&self) -> Vec<(Gen, Gen, Element)> {
        let mut out = Vec::new();
        for x in self.gens() {
            for y in self.gens().filter(|&y| y != x) {
                out.push((x, y, self.product(x, y)));
            }
        }
        out
    }

    pub fn contains(&self, e: Element) -> bool {
        e.gen.index() < self.names.len() && e.exp >= 1
    }

    pub fn named(&self, element: Element) -> Named<'_> {
        Named { spec: self, element }
    }

    /// The anti-isomorphic presentation whose table is `(x, y) -> self(y, x)`.
    pub fn reversed(&self) -> SemigroupSpec {
        let products: Vec<_> = self.products().into_iter().map(|(x, y, e)| (y, x, e)).collect();
        SemigroupSpec::new(&self.names, &products).expect("reversal preserves totality")
    }
}
