//! Exact scalar fields used throughout the engine.
//!
//! Linear algebra is generic over [`Field`]; the two implementations are the
//! rationals ([`Rational`]) and cyclotomic fields ([`crate::cyclotomic::Cyclotomic`]).

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Exact field arithmetic.
///
/// Elements are immutable values; every operation returns a fresh element.
pub trait Field: Clone + PartialEq + Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// `ζ_order^power`, if the field can represent it.
    fn root_of_unity(order: u64, power: u64) -> Option<Self>;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(v)))
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }

    /// Integer power, allowing negative exponents for nonzero elements.
    fn powi(&self, exp: i64) -> Self {
        if exp >= 0 {
            self.pow(exp as u64)
        } else {
            self.inv().pow(exp.unsigned_abs())
        }
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn root_of_unity(order: u64, power: u64) -> Option<Self> {
        match (order, power % order.max(1)) {
            (_, 0) => Some(One::one()),
            (2, 1) => Some(-<Rational as One>::one()),
            _ => None,
        }
    }
}

/// Convenience constructor for rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Rational from an integer.
pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Converts an integral rational to `i64`, returning `None` otherwise.
pub fn to_i64(r: &Rational) -> Option<i64> {
    if !r.is_integer() {
        return None;
    }
    i64::try_from(r.to_integer()).ok()
}

/// Floor of a rational as `i64`.
pub fn floor_i64(r: &Rational) -> i64 {
    i64::try_from(r.floor().to_integer()).expect("rational out of i64 range")
}

/// Ceiling of a rational as `i64`.
pub fn ceil_i64(r: &Rational) -> i64 {
    i64::try_from(r.ceil().to_integer()).expect("rational out of i64 range")
}

/// Fractional part in `[0, 1)`.
pub fn frac(r: &Rational) -> Rational {
    r - r.floor()
}

/// Absolute value.
pub fn abs(r: &Rational) -> Rational {
    r.abs()
}
