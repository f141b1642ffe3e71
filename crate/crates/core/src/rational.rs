//! Exact rational numbers, the extended value type with `+∞`, and the
//! canonical `p/q` text rendering.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Builds the rational `n/d`. Panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer rational `n`.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `p/q` or an integer literal such as `-3`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Renders `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Returns the rational as a `u64` when it is a non-negative integer that fits.
pub fn as_u64(value: &Rational) -> Option<u64> {
    if value.is_integer() && !value.is_negative() {
        value.numer().to_u64()
    } else {
        None
    }
}

/// Least common multiple of the denominators of `values` (1 for none).
pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// A rational extended with `+∞`. `Finite` values order below `Infinite`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ext {
    /// A finite value.
    Finite(Rational),
    /// Positive infinity.
    Infinite,
}

impl Ext {
    /// The finite zero.
    pub fn zero() -> Self {
        Ext::Finite(Rational::zero())
    }

    /// True for `Infinite`.
    pub fn is_infinite(&self) -> bool {
        matches!(self, Ext::Infinite)
    }

    /// True for `Finite(0)`.
    pub fn is_zero(&self) -> bool {
        matches!(self, Ext::Finite(v) if v.is_zero())
    }

    /// The finite value, if any.
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Ext::Finite(v) => Some(v),
            Ext::Infinite => None,
        }
    }

    /// The smaller of two extended values.
    pub fn min(self, other: Ext) -> Ext {
        if other < self {
            other
        } else {
            self
        }
    }
}

impl From<Rational> for Ext {
    fn from(v: Rational) -> Self {
        Ext::Finite(v)
    }
}

impl Add<&Rational> for &Ext {
    type Output = Ext;

    fn add(self, rhs: &Rational) -> Ext {
        match self {
            Ext::Finite(v) => Ext::Finite(v + rhs),
            Ext::Infinite => Ext::Infinite,
        }
    }
}

impl PartialEq<Rational> for Ext {
    fn eq(&self, other: &Rational) -> bool {
        matches!(self, Ext::Finite(v) if v == other)
    }
}

impl PartialOrd<Rational> for Ext {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(match self {
            Ext::Finite(v) => v.cmp(other),
            Ext::Infinite => Ordering::Greater,
        })
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Finite(v) => f.write_str(&fmt_rational(v)),
            Ext::Infinite => f.write_str("∞"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render_round_trip() {
        for text in ["0", "-3", "7/4", "-1/3", "123456789012345678901234567891/7"] {
            let v = parse_rational(text).unwrap();
            assert_eq!(fmt_rational(&v), text);
        }
        assert_eq!(fmt_rational(&parse_rational("4/2").unwrap()), "2");
        assert_eq!(fmt_rational(&parse_rational("3/-6").unwrap()), "-1/2");
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
        assert!(parse_rational("0.5").is_none());
    }

    #[test]
    fn ext_order_puts_infinity_last() {
        assert!(Ext::Finite(int(1_000_000)) < Ext::Infinite);
        assert!(Ext::Finite(int(-1)) < Ext::zero());
        assert_eq!(Ext::Infinite.min(Ext::zero()), Ext::zero());
        assert_eq!(&Ext::Infinite + &int(3), Ext::Infinite);
        assert_eq!(&Ext::zero() + &ratio(1, 2), Ext::Finite(ratio(1, 2)));
    }

    #[test]
    fn lcm_of_denominators() {
        let values = [ratio(1, 2), ratio(3, 4), int(2), ratio(1, 6)];
        assert_eq!(lcm_denominators(values.iter()), BigInt::from(12));
        assert_eq!(lcm_denominators(std::iter::empty()), BigInt::one());
    }
}
