//! The exact scalar abstraction shared by every engine.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed};

/// An exact field of characteristic zero.
///
/// Every counting engine is written against this trait so that the numeric
/// type is a parameter rather than a hard-wired choice. The default instance
/// is [`BigRational`]. Floating point types deliberately do not qualify
/// because they are not `Ord` or `Hash`.
pub trait Scalar:
    Num + Signed + FromPrimitive + Clone + Ord + Hash + Debug + Display + FromStr + Send + Sync + 'static
{
    /// Embeds a machine integer.
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("every i64 embeds into an exact scalar")
    }

    /// Embeds an unsigned machine integer.
    fn uint(n: u64) -> Self {
        Self::from_u64(n).expect("every u64 embeds into an exact scalar")
    }

    /// Builds the quotient `num / den`; panics if `den` is zero.
    fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::int(num) / Self::int(den)
    }

    /// Renders the value as `p/q` in lowest terms with `q > 0`, always
    /// including the denominator.
    fn to_pq(&self) -> String;

    /// Parses the `p/q` (or bare integer) form.
    fn parse_pq(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}

impl Scalar for BigRational {
    fn to_pq(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

/// `n!` in the scalar type.
pub fn factorial<S: Scalar>(n: u64) -> S {
    (1..=n).fold(S::one(), |acc, k| acc * S::uint(k))
}

/// The falling product `(b-1)(b-2)...(b-k)`, which vanishes when `k >= b`.
///
/// This is `(b-1)!/(b-1-k)!` whenever the right side is defined.
pub fn falling<S: Scalar>(b: i64, k: usize) -> S {
    (0..k as i64).fold(S::one(), |acc, t| acc * S::int(b - 1 - t))
}

/// Converts a big integer into the scalar type.
pub fn from_bigint<S: Scalar>(n: &BigInt) -> S {
    // Going through the decimal form keeps the trait bound minimal.
    S::parse_pq(&n.to_string()).expect("integers parse as scalars")
}

/// Returns true when the value is a non-negative integer.
pub fn is_nonneg_integer(x: &BigRational) -> bool {
    x.is_integer() && !x.is_negative()
}

/// Convenience constructor mirroring [`Scalar::int`] for the default type.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Builds `num / den` in the default type.
pub fn rat2(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pq_form_always_has_denominator() {
        assert_eq!(rat(100).to_pq(), "100/1");
        assert_eq!(rat2(-6, 4).to_pq(), "-3/2");
        assert_eq!(BigRational::parse_pq("7/14"), Some(rat2(1, 2)));
        assert_eq!(BigRational::parse_pq("5"), Some(rat(5)));
    }

    #[test]
    fn factorials_and_falling_products() {
        assert_eq!(factorial::<BigRational>(5), rat(120));
        assert_eq!(falling::<BigRational>(5, 2), rat(12));
        assert_eq!(falling::<BigRational>(2, 2), rat(0));
        assert_eq!(falling::<BigRational>(7, 0), rat(1));
    }
}
