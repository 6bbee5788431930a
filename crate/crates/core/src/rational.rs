//! Exact rational helpers: token parsing and the `{"num", "den"}` JSON shape.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// How a partition token was written on input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    /// `p/q` or a bare integer.
    Exact,
    /// A decimal such as `.2` or `0.75`; parsed exactly as a decimal fraction.
    Decimal,
}

/// Parses `p/q`, an integer, or a finite decimal into an exact rational.
pub fn parse_rational(token: &str) -> Result<(BigRational, TokenKind)> {
    let t = token.trim();
    let bad = || Error::InvalidArgument(format!("cannot parse rational token {token:?}"));
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = t.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
        let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok((BigRational::new(p, q), TokenKind::Exact));
    }
    if !t.contains(['.', 'e', 'E']) {
        let p = BigInt::from_str(t).map_err(|_| bad())?;
        return Ok((BigRational::from_integer(p), TokenKind::Exact));
    }
    if t.contains(['e', 'E']) {
        return Err(bad());
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = body.split_once('.').ok_or_else(bad)?;
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let mut r = BigRational::new(num, den);
    if neg {
        r = -r;
    }
    Ok((r, TokenKind::Decimal))
}

/// Parses a comma-separated list of rational tokens.
pub fn parse_rational_list(list: &str) -> Result<(Vec<BigRational>, TokenKind)> {
    let mut kind = TokenKind::Exact;
    let mut out = Vec::new();
    for tok in list.split(',') {
        let (r, k) = parse_rational(tok)?;
        if k == TokenKind::Decimal {
            kind = TokenKind::Decimal;
        }
        out.push(r);
    }
    Ok((out, kind))
}

pub fn to_f64(r: &BigRational) -> f64 {
    // Plain `to_f64` overflows on huge numerators/denominators; scale first.
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    let bits = r.numer().bits().max(r.denom().bits()) as i64;
    let shift = (bits - 900).max(0) as usize;
    let n = (r.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (r.denom() >> shift).to_f64().unwrap_or(1.0);
    n / d
}

/// Formats as `p/q` (or `p` for integers).
pub fn display(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn is_in_unit_interval(r: &BigRational) -> bool {
    !r.is_negative() && r < &BigRational::one()
}

/// Serializes a rational as `{"num": <int>, "den": <int>}` with arbitrary-size integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactRational(pub BigRational);

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let num = serde_json::Number::from_str(&self.0.numer().to_string()).map_err(serde::ser::Error::custom)?;
        let den = serde_json::Number::from_str(&self.0.denom().to_string()).map_err(serde::ser::Error::custom)?;
        let mut s = serializer.serialize_struct("Rational", 2)?;
        s.serialize_field("num", &num)?;
        s.serialize_field("den", &den)?;
        s.end()
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
