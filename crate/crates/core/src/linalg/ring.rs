//! Checked integer arithmetic shared by the machine-word fast path and the
//! arbitrary-precision path.
//!
//! Every elimination routine is written once over [`Ring`]. Callers run it on
//! `i64` first and rerun on `BigInt` when any operation reports [`Overflow`],
//! so results never depend on the word size.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Overflow;

pub(crate) trait Ring:
    Clone + Debug + PartialEq + Ord + Zero + One + Signed + Integer + CheckedAdd + CheckedSub + CheckedMul
{
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;

    fn add_c(&self, other: &Self) -> Result<Self, Overflow> {
        self.checked_add(other).ok_or(Overflow)
    }

    fn sub_c(&self, other: &Self) -> Result<Self, Overflow> {
        self.checked_sub(other).ok_or(Overflow)
    }

    fn mul_c(&self, other: &Self) -> Result<Self, Overflow> {
        self.checked_mul(other).ok_or(Overflow)
    }

    fn neg_c(&self) -> Result<Self, Overflow> {
        Self::zero().sub_c(self)
    }

    fn abs_c(&self) -> Result<Self, Overflow> {
        if self.is_negative() {
            self.neg_c()
        } else {
            Ok(self.clone())
        }
    }

    /// `a - q * b`
    fn sub_mul_c(&self, q: &Self, b: &Self) -> Result<Self, Overflow> {
        self.sub_c(&q.mul_c(b)?)
    }
}

impl Ring for i64 {
    fn from_big(v: &BigInt) -> Option<Self> {
        // Keep headroom so that abs/neg never touch i64::MIN.
        v.to_i64().filter(|x| *x > i64::MIN)
    }

    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }

    fn neg_c(&self) -> Result<Self, Overflow> {
        self.checked_neg().ok_or(Overflow)
    }
}

impl Ring for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }

    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Extended Euclid with checked arithmetic: returns `(g, x, y)` with
/// `x·a + y·b = g = gcd(a, b) ≥ 0`.
pub(crate) fn ext_gcd<T: Ring>(a: &T, b: &T) -> Result<(T, T, T), Overflow> {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (T::one(), T::zero());
    let (mut old_t, mut t) = (T::zero(), T::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = old_r.sub_mul_c(&q, &r)?;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = old_s.sub_mul_c(&q, &s)?;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = old_t.sub_mul_c(&q, &t)?;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        Ok((old_r.neg_c()?, old_s.neg_c()?, old_t.neg_c()?))
    } else {
        Ok((old_r, old_s, old_t))
    }
}

/// Converts a slice of big integers to `T`, or `None` if one does not fit.
pub(crate) fn lower<T: Ring>(values: &[BigInt]) -> Option<Vec<T>> {
    values.iter().map(T::from_big).collect()
}

pub(crate) fn raise<T: Ring>(values: &[T]) -> Vec<BigInt> {
    values.iter().map(Ring::to_big).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ext_gcd_bezout() {
        for (a, b) in [(12i64, 18i64), (-4, 6), (0, 5), (7, 0), (0, 0), (-9, -6)] {
            let (g, x, y) = ext_gcd(&a, &b).unwrap();
            assert_eq!(x * a + y * b, g);
            assert_eq!(g, a.gcd(&b));
        }
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(i64::MAX.add_c(&1), Err(Overflow));
        assert_eq!(i64::from_big(&BigInt::from(i64::MIN)), None);
    }
}
