use thiserror::Error;

use crate::semigroup::{Element, Gen};

/// Problems with a presentation itself (table shape, names).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("alphabet has {0} generators, more than supported")]
    AlphabetTooLarge(usize),
    #[error("generator name `{0}` is empty or contains whitespace")]
    InvalidName(String),
    #[error("generator name `{0}` appears twice")]
    DuplicateName(String),
    #[error("generator index {0} is outside the alphabet")]
    UnknownGenerator(u16),
    #[error("product {0}{0} is implicit and must not be listed")]
    SameGeneratorProduct(String),
    #[error("product {left}{right} has exponent 0")]
    ZeroExponent { left: String, right: String },
    #[error("product {left}{right} is listed more than once")]
    DuplicateProduct { left: String, right: String },
    #[error("product {left}{right} is missing")]
    MissingProduct { left: String, right: String },
    #[error("malformed spec: {0}")]
    Malformed(String),
}

/// Failure of a single top-level reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ReduceError {
    #[error("reduction exceeded {bound} steps")]
    DepthExceeded { bound: u64 },
    #[error("exponent overflowed 64 bits")]
    ExponentOverflow,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Reduce(#[from] ReduceError),
    #[error("trajectory of {x:?} by {y:?} has no certified periodic regime within horizon {horizon}")]
    HorizonExhausted { x: Element, y: Gen, horizon: u64 },
    #[error("return {z:?}^{t}·{y:?}^{q} = {z:?}^{s} gives a negative multiplier")]
    NegativeMultiplier { y: Gen, z: Gen, t: u64, q: u64, s: u64 },
    #[error("class containing {x:?} and {y:?} violates M(x,y)·M(y,x) = 1")]
    IntraClassInconsistency { x: Gen, y: Gen },
    #[error("rational arithmetic overflowed")]
    ArithmeticOverflow,
    #[error("certificate violation at m = {m}: {reason}")]
    CertificateViolation { m: u64, witness: Element, reason: String },
    #[error("frontier of {size} elements exceeds the cap {cap}")]
    FrontierCap { size: usize, cap: usize },
    #[error("search over {candidates} tables exceeds the cap {cap}")]
    SearchTooLarge { candidates: u128, cap: u128 },
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("invalid search parameters: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
