//! Machine-word fast path with checked promotion to arbitrary precision.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Raised by the `i64` instance when an operation would overflow; callers
/// then rerun the computation over `BigInt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) trait Scalar: Clone + Ord + Eq + Hash + Debug {
    fn zero() -> Self;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn add(&self, o: &Self) -> Result<Self, Overflow>;
    fn sub(&self, o: &Self) -> Result<Self, Overflow>;
    fn neg(&self) -> Result<Self, Overflow>;
    /// `|self| <= |o|`
    fn abs_le(&self, o: &Self) -> bool;
    fn abs_gt_big(&self, bound: &BigInt) -> bool;
    fn abs_u(&self) -> Result<Self, Overflow> {
        if self.is_neg() {
            self.neg()
        } else {
            Ok(self.clone())
        }
    }
    fn from_big(b: &BigInt) -> Result<Self, Overflow>;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn is_pos(&self) -> bool {
        *self > 0
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
    fn add(&self, o: &Self) -> Result<Self, Overflow> {
        self.checked_add(*o).ok_or(Overflow)
    }
    fn sub(&self, o: &Self) -> Result<Self, Overflow> {
        self.checked_sub(*o).ok_or(Overflow)
    }
    fn neg(&self) -> Result<Self, Overflow> {
        self.checked_neg().ok_or(Overflow)
    }
    fn abs_le(&self, o: &Self) -> bool {
        self.unsigned_abs() <= o.unsigned_abs()
    }
    fn abs_gt_big(&self, bound: &BigInt) -> bool {
        match bound.to_u64() {
            Some(b) => self.unsigned_abs() > b,
            None => false,
        }
    }
    fn from_big(b: &BigInt) -> Result<Self, Overflow> {
        // keep headroom so sums of two stored values cannot wrap silently
        match b.to_i64() {
            Some(x) if x.unsigned_abs() < (1u64 << 61) => Ok(x),
            _ => Err(Overflow),
        }
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn add(&self, o: &Self) -> Result<Self, Overflow> {
        Ok(self + o)
    }
    fn sub(&self, o: &Self) -> Result<Self, Overflow> {
        Ok(self - o)
    }
    fn neg(&self) -> Result<Self, Overflow> {
        Ok(-self)
    }
    fn abs_le(&self, o: &Self) -> bool {
        self.magnitude() <= o.magnitude()
    }
    fn abs_gt_big(&self, bound: &BigInt) -> bool {
        self.magnitude() > bound.magnitude()
    }
    fn from_big(b: &BigInt) -> Result<Self, Overflow> {
        Ok(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}
