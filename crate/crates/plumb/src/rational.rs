//! Exact rationals extended with a single point at infinity.
//!
//! Values are kept reduced with a nonnegative denominator. The denominator is
//! zero exactly for the infinite value, which is stored as `1/0`; there is no
//! signed infinity. `1/∞ = 0` and `x ± ∞ = ∞` for finite `x`, while combining
//! two infinite operands is an error.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RationalError {
    #[error("0/0 is indeterminate")]
    Indeterminate,
    #[error("operation requires at least one finite operand")]
    BothInfinite,
}

/// A reduced rational number or the point `∞`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtendedRational {
    num: BigInt,
    den: BigInt,
}

impl ExtendedRational {
    /// Builds `num/den`, reducing and normalizing the sign into the numerator.
    /// `den == 0` yields `∞` unless `num` is also zero, which is rejected.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, RationalError> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            if num.is_zero() {
                return Err(RationalError::Indeterminate);
            }
            return Ok(Self {
                num: BigInt::one(),
                den,
            });
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = (num / &g, den / g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Ok(Self { num, den })
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self {
            num: n.into(),
            den: BigInt::one(),
        }
    }

    pub fn infinity() -> Self {
        Self {
            num: BigInt::one(),
            den: BigInt::zero(),
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn is_infinite(&self) -> bool {
        self.den.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero() && !self.den.is_zero()
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    /// `1/x`, with `1/∞ = 0` and `1/0 = ∞`.
    pub fn recip(&self) -> Self {
        if self.is_infinite() {
            return Self::zero();
        }
        if self.num.is_zero() {
            return Self::infinity();
        }
        let (mut num, mut den) = (self.den.clone(), self.num.clone());
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Self { num, den }
    }

    pub fn neg(&self) -> Self {
        if self.is_infinite() {
            return self.clone();
        }
        Self {
            num: -self.num.clone(),
            den: self.den.clone(),
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, RationalError> {
        match (self.is_infinite(), rhs.is_infinite()) {
            (true, true) => Err(RationalError::BothInfinite),
            (true, false) | (false, true) => Ok(Self::infinity()),
            (false, false) => Self::new(
                &self.num * &rhs.den + &rhs.num * &self.den,
                &self.den * &rhs.den,
            ),
        }
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, RationalError> {
        self.checked_add(&rhs.neg())
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, RationalError> {
        match (self.is_infinite(), rhs.is_infinite()) {
            (true, true) => Err(RationalError::BothInfinite),
            (true, false) => {
                if rhs.is_zero() {
                    Err(RationalError::Indeterminate)
                } else {
                    Ok(Self::infinity())
                }
            }
            (false, true) => {
                if self.is_zero() {
                    Err(RationalError::Indeterminate)
                } else {
                    Ok(Self::infinity())
                }
            }
            (false, false) => Self::new(&self.num * &rhs.num, &self.den * &rhs.den),
        }
    }
}

impl PartialOrd for ExtendedRational {
    /// `∞` compares equal only to itself and is unordered against every
    /// finite value.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Some(Ordering::Equal),
            (true, false) | (false, true) => None,
            (false, false) => Some((&self.num * &other.den).cmp(&(&other.num * &self.den))),
        }
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
