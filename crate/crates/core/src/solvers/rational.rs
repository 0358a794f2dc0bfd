//! Exact rational scalars.
//!
//! Every distance, amount and norm in the crate is a [`Rational`]: an
//! arbitrary-precision fraction kept in lowest terms with a positive
//! denominator. Display prints `p/q`, or `p` when the value is an integer.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rational = BigRational;

/// `numer / denom` as an exact rational. Panics if `denom == 0`.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `p/q` or `p` with an optional sign on the numerator.
///
/// The denominator must be a nonzero unsigned integer. The result is
/// normalized.
pub fn parse_rational(token: &str) -> Option<Rational> {
    let token = token.trim();
    let (numer, denom) = match token.split_once('/') {
        Some((p, q)) => (p, Some(q)),
        None => (token, None),
    };
    if !is_integer_literal(numer, true) {
        return None;
    }
    let numer: BigInt = numer.parse().ok()?;
    let denom: BigInt = match denom {
        Some(q) => {
            if !is_integer_literal(q, false) {
                return None;
            }
            q.parse().ok()?
        }
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return None;
    }
    Some(Rational::new(numer, denom))
}

fn is_integer_literal(s: &str, signed: bool) -> bool {
    let digits = if signed {
        s.strip_prefix(['-', '+']).unwrap_or(s)
    } else {
        s
    };
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}
