//! Integer scalars used by the elimination kernels.
//!
//! Every kernel is written once against [`Scalar`] and first run over `i128`
//! with checked arithmetic. When a checked operation overflows the kernel
//! returns [`Overflow`] and the caller reruns it over [`BigInt`], which never
//! overflows. Results are therefore exact regardless of coefficient growth.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A checked operation left the range of the scalar type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

pub type Checked<T> = Result<T, Overflow>;

pub trait Scalar: Clone + Debug + PartialEq + Eq + Ord {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn vanishes(&self) -> bool;
    fn add(&self, rhs: &Self) -> Checked<Self>;
    fn sub(&self, rhs: &Self) -> Checked<Self>;
    fn mul(&self, rhs: &Self) -> Checked<Self>;
    fn neg(&self) -> Checked<Self>;
    /// Quotient rounded toward negative infinity.
    fn div_floor(&self, rhs: &Self) -> Self;
    fn magnitude(&self) -> Checked<Self>;
    fn to_bigint(&self) -> BigInt;

    fn is_unit(&self) -> bool {
        *self == Self::one() || self.neg().map(|n| n == Self::one()).unwrap_or(false)
    }

    fn is_below_zero(&self) -> bool {
        *self < Self::zero()
    }

    /// `self - rhs * factor`.
    fn sub_mul(&self, rhs: &Self, factor: &Self) -> Checked<Self> {
        self.sub(&rhs.mul(factor)?)
    }

    /// Nearest-integer quotient, which keeps Euclidean remainders at most half
    /// the divisor in absolute value.
    fn div_round(&self, rhs: &Self) -> Checked<Self> {
        let q = self.div_floor(rhs);
        let r = self.sub(&q.mul(rhs)?)?;
        let twice = r.add(&r)?.magnitude()?;
        // floor remainders share the divisor's sign, so stepping the quotient
        // up by one always shrinks them
        if twice > rhs.magnitude()? {
            q.add(&Self::one())
        } else {
            Ok(q)
        }
    }
}

impl Scalar for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn vanishes(&self) -> bool {
        *self == 0
    }
    fn add(&self, rhs: &Self) -> Checked<Self> {
        self.checked_add(*rhs).ok_or(Overflow)
    }
    fn sub(&self, rhs: &Self) -> Checked<Self> {
        self.checked_sub(*rhs).ok_or(Overflow)
    }
    fn mul(&self, rhs: &Self) -> Checked<Self> {
        self.checked_mul(*rhs).ok_or(Overflow)
    }
    fn neg(&self) -> Checked<Self> {
        self.checked_neg().ok_or(Overflow)
    }
    fn div_floor(&self, rhs: &Self) -> Self {
        Integer::div_floor(self, rhs)
    }
    fn magnitude(&self) -> Checked<Self> {
        self.checked_abs().ok_or(Overflow)
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
}

impl Scalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Checked<Self> {
        Ok(self + rhs)
    }
    fn sub(&self, rhs: &Self) -> Checked<Self> {
        Ok(self - rhs)
    }
    fn mul(&self, rhs: &Self) -> Checked<Self> {
        Ok(self * rhs)
    }
    fn neg(&self) -> Checked<Self> {
        Ok(-self)
    }
    fn div_floor(&self, rhs: &Self) -> Self {
        Integer::div_floor(self, rhs)
    }
    fn magnitude(&self) -> Checked<Self> {
        Ok(Signed::abs(self))
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn is_unit(&self) -> bool {
        Signed::abs(self).is_one()
    }
}

/// Converts an exact result back to `i64`, failing if it does not fit.
pub fn bigint_to_i64(v: &BigInt) -> Checked<i64> {
    v.to_i64().ok_or(Overflow)
}

/// Runs `fast` over `i128`; on overflow reruns `slow` over `BigInt`.
pub fn with_fallback<R>(fast: impl FnOnce() -> Checked<R>, slow: impl FnOnce() -> R) -> R {
    match fast() {
        Ok(r) => r,
        Err(Overflow) => slow(),
    }
}
