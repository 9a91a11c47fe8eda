//! Coefficient fields for polynomial arithmetic.
//!
//! Everything in this crate is generic over [`Scalar`]. The verification
//! machinery is only meaningful over an exact field, so the crate root
//! aliases fix `S = BigRational`; the float impls exist for quick numeric
//! experiments where exact equality is not needed.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed, ToPrimitive};

/// A field usable as polynomial coefficients.
pub trait Scalar: Num + Signed + Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn from_integer(n: i64) -> Self;

    /// `numer / denom`, or `None` if the ratio cannot be represented.
    fn from_ratio(numer: &BigInt, denom: &BigInt) -> Option<Self>;

    fn half() -> Self {
        Self::one() / Self::from_integer(2)
    }
}

impl Scalar for BigRational {
    fn from_integer(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_ratio(numer: &BigInt, denom: &BigInt) -> Option<Self> {
        if denom == &BigInt::from(0) {
            return None;
        }
        Some(BigRational::new(numer.clone(), denom.clone()))
    }
}

impl Scalar for f64 {
    fn from_integer(n: i64) -> Self {
        n as f64
    }

    fn from_ratio(numer: &BigInt, denom: &BigInt) -> Option<Self> {
        let d = denom.to_f64()?;
        if d == 0.0 {
            return None;
        }
        Some(numer.to_f64()? / d)
    }
}

impl Scalar for f32 {
    fn from_integer(n: i64) -> Self {
        n as f32
    }

    fn from_ratio(numer: &BigInt, denom: &BigInt) -> Option<Self> {
        let d = denom.to_f32()?;
        if d == 0.0 {
            return None;
        }
        Some(numer.to_f32()? / d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_is_reduced() {
        let r = BigRational::from_ratio(&BigInt::from(-4), &BigInt::from(6)).unwrap();
        assert_eq!(*r.numer(), BigInt::from(-2));
        assert_eq!(*r.denom(), BigInt::from(3));
        let z = BigRational::from_ratio(&BigInt::from(0), &BigInt::from(-7)).unwrap();
        assert_eq!(*z.denom(), BigInt::from(1));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(BigRational::from_ratio(&BigInt::from(1), &BigInt::from(0)).is_none());
        assert!(f64::from_ratio(&BigInt::from(1), &BigInt::from(0)).is_none());
    }

    #[test]
    fn half() {
        assert_eq!(f64::half(), 0.5);
        let two = <BigRational as Scalar>::from_integer(2);
        assert_eq!(BigRational::half() * two, <BigRational as Scalar>::from_integer(1));
    }
}
