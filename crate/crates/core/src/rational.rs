//! Exact rationals with checked arithmetic.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Signed, Zero};

use crate::error::{Error, Result};

/// A rational in lowest terms with a positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(Ratio<i128>);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));

    /// Panics on a zero denominator.
    pub fn new(numer: i128, denom: i128) -> Self {
        Rational(Ratio::new(numer, denom))
    }

    pub fn integer(n: i128) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn checked_mul(self, rhs: Rational) -> Result<Rational> {
        self.0
            .checked_mul(&rhs.0)
            .map(Rational)
            .ok_or(Error::ArithmeticOverflow)
    }

    pub fn checked_add(self, rhs: Rational) -> Result<Rational> {
        self.0
            .checked_add(&rhs.0)
            .map(Rational)
            .ok_or(Error::ArithmeticOverflow)
    }

    pub fn checked_sub(self, rhs: Rational) -> Result<Rational> {
        self.0
            .checked_sub(&rhs.0)
            .map(Rational)
            .ok_or(Error::ArithmeticOverflow)
    }

    pub fn recip(self) -> Rational {
        Rational(self.0.recip())
    }

    /// Smallest integer `>= self`.
    pub fn ceil(&self) -> i128 {
        let (q, r) = self.numer().div_mod_floor(&self.denom());
        if r == 0 {
            q
        } else {
            q + 1
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// Compares `self` against an integer without constructing a ratio.
    pub fn cmp_int(&self, n: i128) -> Ordering {
        self.numer().cmp(&(n * self.denom()))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_ceil() {
        let r = Rational::new(6, 4);
        assert_eq!((r.numer(), r.denom()), (3, 2));
        assert_eq!(r.ceil(), 2);
        assert_eq!(Rational::integer(3).ceil(), 3);
        assert_eq!(Rational::new(-3, 2).ceil(), -1);
        assert_eq!(r.to_string(), "3/2");
    }

    #[test]
    fn overflow_is_reported() {
        let big = Rational::integer(i128::MAX);
        assert_eq!(big.checked_mul(Rational::integer(2)), Err(Error::ArithmeticOverflow));
        assert_eq!(big.checked_add(Rational::ONE), Err(Error::ArithmeticOverflow));
    }

    #[test]
    fn compare_with_integer() {
        assert_eq!(Rational::new(5, 2).cmp_int(2), Ordering::Greater);
        assert_eq!(Rational::new(4, 2).cmp_int(2), Ordering::Equal);
        assert_eq!(Rational::new(3, 2).cmp_int(2), Ordering::Less);
    }
}
