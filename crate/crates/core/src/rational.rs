//! Exact rational helpers.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision fraction, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn half() -> Rational {
    frac(1, 2)
}

/// `true` for values in `{k/2 : k >= 0}`.
pub fn is_half_integral(value: &Rational) -> bool {
    !value.is_negative() && (value.denom().is_one() || *value.denom() == BigInt::from(2))
}

/// `true` when the value is in `[0, 1]`.
pub fn in_unit_interval(value: &Rational) -> bool {
    !value.is_negative() && *value <= Rational::one()
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let r = frac(6, -4);
        assert_eq!(*r.numer(), BigInt::from(-3));
        assert_eq!(*r.denom(), BigInt::from(2));
        assert_eq!(frac(1, 3) + frac(1, 6), half());
    }

    #[test]
    fn half_integrality() {
        assert!(is_half_integral(&frac(3, 2)));
        assert!(is_half_integral(&int(0)));
        assert!(!is_half_integral(&frac(1, 3)));
        assert!(!is_half_integral(&frac(-1, 2)));
    }
}
