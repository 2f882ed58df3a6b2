//! Exact integer and rational arithmetic.
//!
//! [`Rational`] is an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator. Reports serialize it as `"p/q"`, or `"n"` when the
//! denominator is one, which is exactly the `Display` form.

mod pi;

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use pi::{compare_pi_scalars, pi, pi_enclosure, PiScalar, DEFAULT_PI_DIGITS};

pub type Rational = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn from_big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        // acc * (n - i) is a product of i + 1 consecutive integers times C(n, i),
        // so division by i + 1 is exact.
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `x (x + 1) ... (x + k - 1)`, i.e. `Γ(x + k) / Γ(x)` without gamma functions.
pub fn rising_product(x: &Rational, k: u64) -> Rational {
    let mut acc = Rational::one();
    let mut factor = x.clone();
    for _ in 0..k {
        acc *= &factor;
        factor += Rational::one();
    }
    acc
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Returns the integer value of `x`, or `InternalNonInteger` naming `what`.
pub fn expect_integer(x: Rational, what: impl Into<String>) -> Result<BigInt> {
    if is_integer(&x) {
        Ok(x.to_integer())
    } else {
        Err(Error::InternalNonInteger {
            what: what.into(),
            value: x.to_string(),
        })
    }
}

pub fn to_u64(n: &BigInt, what: &str) -> Result<u64> {
    n.to_u64()
        .ok_or_else(|| Error::Overflow(format!("{what} = {n} does not fit in u64")))
}

pub fn pow(x: &Rational, e: u32) -> Rational {
    num_traits::pow(x.clone(), e as usize)
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Parses `"p/q"`, integers, and finite decimals such as `"-1.25e-3"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if t.contains('/') {
        let r = Rational::from_str(t).map_err(|e| Error::Parse(format!("{t:?}: {e}")))?;
        return Ok(r);
    }
    parse_decimal(t)
}

fn parse_decimal(t: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("{t:?} is not an exact number"));
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = t[i + 1..].parse().map_err(|_| bad())?;
            (&t[..i], e)
        }
        None => (t, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (whole, frac) = match digits.split_once('.') {
        Some((w, f)) => (w, f),
        None => (digits, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let all_digits = format!("{whole}{frac}");
    let mut value = from_big(BigInt::from_str(&all_digits).map_err(|_| bad())?);
    let scale = exponent - frac.len() as i64;
    if scale.unsigned_abs() > 10_000 {
        return Err(bad());
    }
    let ten = from_big(BigInt::from(10u32).pow(scale.unsigned_abs() as u32));
    if scale >= 0 {
        value *= ten;
    } else {
        value /= ten;
    }
    Ok(if negative { -value } else { value })
}

/// Exact rational equal to the shortest decimal that round-trips to `x`.
pub fn from_f64_shortest(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::Parse(format!("non-finite value {x}")));
    }
    // Rust's float Display is the shortest round-trip representation.
    parse_decimal(&format!("{x}"))
}

pub fn abs(x: &Rational) -> Rational {
    x.abs()
}

pub fn floor_int(x: &Rational) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil_int(x: &Rational) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

/// Serde adapter storing a [`Rational`] as its `"p/q"` string.
pub mod serde_rational {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).map_err(de::Error::custom)
    }
}

pub mod serde_rational_pairs {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        pairs: &[(Rational, Rational)],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(pairs.len()))?;
        for (a, b) in pairs {
            seq.serialize_element(&[a.to_string(), b.to_string()])?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<(Rational, Rational)>, D::Error> {
        let raw: Vec<[String; 2]> = Vec::deserialize(d)?;
        raw.iter()
            .map(|[a, b]| Ok((parse_rational(a)?, parse_rational(b)?)))
            .collect::<Result<Vec<_>>>()
            .map_err(de::Error::custom)
    }
}
