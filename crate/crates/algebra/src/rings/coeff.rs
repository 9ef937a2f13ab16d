//! Base coefficient domains sitting at the bottom of the recursive
//! polynomial representation: the integers and the rationals.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact coefficient arithmetic needed by the recursive polynomial layer.
pub(crate) trait Coefficient: Clone + Eq + Hash + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `Some(q)` with `self = q * other`, `None` when no such `q` exists.
    fn exact_div(&self, other: &Self) -> Option<Self>;
    /// Normalized gcd: nonnegative over the integers, `0` or `1` over a field.
    fn gcd(&self, other: &Self) -> Self;
    /// The unit `u` with `self / u` in normal form (sign, or the value itself
    /// over a field). Zero maps to one.
    fn unit_part(&self) -> Self;
}

impl Coefficient for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_one(&self) -> bool {
        One::is_one(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn exact_div(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            return None;
        }
        let (q, r) = self.div_rem(other);
        Zero::is_zero(&r).then_some(q)
    }

    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }

    fn unit_part(&self) -> Self {
        if Signed::is_negative(self) {
            -<BigInt as One>::one()
        } else {
            <BigInt as One>::one()
        }
    }
}

impl Coefficient for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_one(&self) -> bool {
        One::is_one(self)
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn exact_div(&self, other: &Self) -> Option<Self> {
        if Zero::is_zero(other) {
            None
        } else {
            Some(self / other)
        }
    }

    fn gcd(&self, other: &Self) -> Self {
        if Zero::is_zero(self) && Zero::is_zero(other) {
            Zero::zero()
        } else {
            One::one()
        }
    }

    fn unit_part(&self) -> Self {
        if Zero::is_zero(self) {
            One::one()
        } else {
            self.clone()
        }
    }
}
