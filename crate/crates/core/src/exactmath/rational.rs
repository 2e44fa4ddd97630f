//! Arbitrary-precision rationals.
//!
//! `Rational` is `num_rational::BigRational`, which keeps every value in
//! lowest terms with a positive denominator. The helpers here add a
//! fallible constructor, compact parsing and a stable text form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::MathError;

pub type Rational = num_rational::BigRational;

/// Builds the canonical fraction `numer / denom`.
pub fn rat_normalize(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Rational, MathError> {
    let denom = denom.into();
    if denom.is_zero() {
        return Err(MathError::ZeroDenominator);
    }
    Ok(Rational::new(numer.into(), denom))
}

/// Shorthand for small literal fractions. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rational {
    rat_normalize(numer, denom).expect("literal fraction with zero denominator")
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn is_integral(value: &Rational) -> bool {
    value.denom().is_one()
}

/// Parses `7`, `-3`, `1/2` or `-1/2`.
pub fn parse_rational(text: &str) -> Result<Rational, MathError> {
    let bad = || MathError::Parse(text.to_string());
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            rat_normalize(n, d)
        }
        None => {
            let n: BigInt = text.parse().map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
    }
}

/// `num/den` form, or just `num` for integers.
pub fn fmt_rational(value: &Rational) -> String {
    if is_integral(value) {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// `value - floor(value)`, always in `[0, 1)`.
pub fn fractional_part(value: &Rational) -> Rational {
    value - value.floor()
}

/// Exact decimal expansion if the denominator has only factors 2 and 5.
pub fn exact_decimal(value: &Rational) -> Option<String> {
    let mut den = value.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0u32, 0u32);
    while den.is_even() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let digits = twos.max(fives);
    if digits == 0 {
        return Some(value.numer().to_string());
    }
    let scaled = (value * Rational::from_integer(BigInt::from(10).pow(digits))).to_integer();
    let neg = scaled.is_negative();
    let mut body = scaled.abs().to_string();
    while body.len() <= digits as usize {
        body.insert(0, '0');
    }
    let split = body.len() - digits as usize;
    let mut out = format!("{}.{}", &body[..split], &body[split..]);
    while out.ends_with('0') {
        out.pop();
    }
    if neg {
        out.insert(0, '-');
    }
    Some(out)
}

/// Parses a decimal literal such as `0.75` or `-12.5` exactly.
pub fn parse_decimal(text: &str) -> Result<Rational, MathError> {
    let text = text.trim();
    let bad = || MathError::Parse(text.to_string());
    match text.split_once('.') {
        None => parse_rational(text),
        Some((whole, frac)) => {
            if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let neg = whole.starts_with('-');
            let digits: BigInt =
                format!("{}{}", whole.trim_start_matches(['-', '+']), frac).parse().map_err(|_| bad())?;
            let value = Rational::new(digits, BigInt::from(10).pow(frac.len() as u32));
            Ok(if neg { -value } else { value })
        }
    }
}

pub mod serde_rational {
    //! Serializes a `Rational` as its `num/den` string.
    use super::{fmt_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&fmt_rational(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(de)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}
