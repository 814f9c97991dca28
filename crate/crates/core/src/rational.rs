//! Exact rational scalars and their canonical text form.
//!
//! Every quantity in this crate is a `Rational` (arbitrary-precision
//! numerator and denominator). The text form accepted and emitted is
//! `"a"` or `"a/b"` with `b > 0`, always in lowest terms.

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Rational = num::BigRational;

/// Shorthand for small literal rationals in code and tests.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(value: i64) -> Rational {
    Rational::from(BigInt::from(value))
}

/// Parses `"a"` or `"a/b"` with an optional leading minus sign and `b > 0`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = |msg: &str| Error::Parse(format!("invalid rational {s:?}: {msg}"));
    let (numer_str, denom_str) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let numer = parse_integer(numer_str, true).ok_or_else(|| bad("expected integer numerator"))?;
    let denom = match denom_str {
        Some(d) => {
            let d = parse_integer(d, false).ok_or_else(|| bad("expected positive denominator"))?;
            if d.is_zero() {
                return Err(bad("denominator must be positive"));
            }
            d
        }
        None => BigInt::one(),
    };
    Ok(Rational::new(numer, denom))
}

fn parse_integer(s: &str, allow_sign: bool) -> Option<BigInt> {
    let digits = match s.strip_prefix('-') {
        Some(rest) if allow_sign => rest,
        Some(_) => return None,
        None => s,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigInt::from_str(s).ok()
}

/// Canonical text form: lowest terms, integer rendered without `/1`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn abs(r: &Rational) -> Rational {
    if r.is_negative() {
        -r.clone()
    } else {
        r.clone()
    }
}
