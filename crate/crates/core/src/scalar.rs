//! Scalar field abstraction.
//!
//! Everything in the engine is generic over a [`Scalar`]. The exact field used by
//! the verification commands is [`BigRational`](num_rational::BigRational)
//! (aliased as [`Coefficient`](crate::Coefficient)); `f64` also satisfies the
//! bound, which is handy for quick numerical sanity checks but gives no exactness
//! guarantees.

use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, Num, Signed};
use thiserror::Error;

/// Errors raised by scalar arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("integer {0} is not representable in the scalar type")]
    Unrepresentable(i128),
}

/// A field element usable as a coefficient.
pub trait Scalar:
    Num + Signed + FromPrimitive + Clone + PartialEq + Debug + Display + Send + Sync + 'static
{
    /// Embeds an integer. Panics only if the scalar type cannot hold it, which
    /// never happens for the rational types.
    fn from_int(n: i128) -> Self {
        Self::from_i128(n).unwrap_or_else(|| panic!("{}", ScalarError::Unrepresentable(n)))
    }
}

impl<T> Scalar for T where
    T: Num + Signed + FromPrimitive + Clone + PartialEq + Debug + Display + Send + Sync + 'static
{
}

/// Multiplicative inverse, reporting zero as an error instead of panicking.
pub fn checked_inv<S: Scalar>(a: &S) -> Result<S, ScalarError> {
    if a.is_zero() {
        Err(ScalarError::DivisionByZero)
    } else {
        Ok(S::one() / a.clone())
    }
}

/// `a / b` with the same zero check as [`checked_inv`].
pub fn checked_div<S: Scalar>(a: &S, b: &S) -> Result<S, ScalarError> {
    checked_inv(b).map(|inv| a.clone() * inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Coefficient;
    use num_bigint::BigInt;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Coefficient {
        Coefficient::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rational_examples() {
        assert_eq!(q(1, 2) + q(1, 3), q(5, 6));
        assert_eq!(q(2, 3) * q(3, 2), q(1, 1));
        assert_eq!(checked_inv(&q(0, 1)), Err(ScalarError::DivisionByZero));
        assert_eq!(checked_inv(&q(-3, 7)).unwrap(), q(-7, 3));
        assert_eq!(
            checked_div(&q(1, 1), &q(0, 5)),
            Err(ScalarError::DivisionByZero)
        );
    }

    #[test]
    fn canonical_form() {
        let x = q(6, -4);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        let z = q(0, -9);
        assert_eq!(z.numer(), &BigInt::from(0));
        assert_eq!(z.denom(), &BigInt::from(1));
        assert_eq!(Coefficient::from_int(-12), q(-12, 1));
    }

    fn arb_q() -> impl Strategy<Value = Coefficient> {
        (-1000i64..1000, 1i64..1000).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_q(), b in arb_q(), c in arb_q()) {
            prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b.clone() + c.clone()));
            prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a.clone() * (b.clone() * c.clone()));
            prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
            prop_assert_eq!(a.clone() + (-a.clone()), Coefficient::from_int(0));
            if !a.is_zero() {
                prop_assert_eq!(a.clone() * checked_inv(&a).unwrap(), Coefficient::from_int(1));
                prop_assert_eq!(checked_div(&(a.clone() * b.clone()), &a).unwrap(), b);
            }
        }
    }
}
