//! Linear-growth certificates for semigroups that are finite disjoint
//! unions of free monogenic semigroups.
//!
//! A semigroup is presented by a pair table `x·y = z^k` on its generators.
//! The crate validates the table on a finite window, detects persistent
//! pairs and their multipliers, builds a weight function from the
//! condensation of the persistence relation, and certifies
//! `|J(m)| <= L·K·m` against brute-force ball enumeration.

pub mod engine;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod growth;
pub mod persistence;
pub mod pipeline;
pub mod rational;
pub mod semigroup;
pub mod validate;
pub mod weights;

pub use engine::Engine;
pub use error::{Error, ReduceError, Result, SpecError};
pub use exec::Exec;
pub use rational::Rational;
pub use semigroup::{Element, Gen, SemigroupSpec};
