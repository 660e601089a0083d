//! Exact rational plumbing. Rationals serialize as `"n"` or `"n/d"` strings so
//! reports never contain floats.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Canonical string form: `"n"` when the denominator is 1, else `"n/d"` in
/// lowest terms.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `"n"` or `"n/d"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput {
        reason: format!("malformed rational {s:?}; expected \"n\" or \"n/d\""),
    };
    let mut parts = s.splitn(2, '/');
    let numer: BigInt = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    match parts.next() {
        None => Ok(BigRational::from_integer(numer)),
        Some(d) => {
            let denom: BigInt = d.trim().parse().map_err(|_| bad())?;
            if denom.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(numer, denom))
        }
    }
}

/// Rational from an unsigned integer.
pub fn rat_u(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Floor of a rational as a BigInt.
pub fn floor_int(r: &BigRational) -> BigInt {
    r.floor().to_integer()
}

/// Ceiling of a rational as a BigInt.
pub fn ceil_int(r: &BigRational) -> BigInt {
    r.ceil().to_integer()
}

/// |a - b| for rationals.
pub fn abs_diff(a: &BigRational, b: &BigRational) -> BigRational {
    (a - b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["0", "5", "-3", "7/2", "-9/4"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        // reduction to lowest terms
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn floor_and_ceil() {
        assert_eq!(floor_int(&parse_rational("7/2").unwrap()), BigInt::from(3));
        assert_eq!(ceil_int(&parse_rational("7/2").unwrap()), BigInt::from(4));
        assert_eq!(ceil_int(&parse_rational("4").unwrap()), BigInt::from(4));
    }
}
