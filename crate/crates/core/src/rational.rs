//! Exact rational helpers shared by every module.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

pub fn ratio(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Rational {
    Rational::new(numer.into(), denom.into())
}

/// Floor of a non-negative rational as `u64`. Returns `None` on negative or
/// oversized values.
pub fn floor_u64(x: &Rational) -> Option<u64> {
    x.floor().to_integer().to_u64()
}

pub fn ceil_u64(x: &Rational) -> Option<u64> {
    x.ceil().to_integer().to_u64()
}

pub fn fract(x: &Rational) -> Rational {
    x - x.floor()
}

pub fn to_f64(x: &Rational) -> f64 {
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Fall back to a scaled integer division for huge operands.
            let scaled = (x * int(BigInt::from(1u64 << 53))).round().to_integer();
            scaled.to_f64().unwrap_or(f64::NAN) / (1u64 << 53) as f64
        }
    }
}

/// Parses `"a/b"`, `"-a/b"`, integers and plain decimals such as `"43.038"`.
/// Decimals are converted exactly: `"0.1"` becomes `1/10`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Input("empty number".into()));
    }
    if let Some((n, d)) = text.split_once('/') {
        let numer = parse_int(n)?;
        let denom = parse_int(d)?;
        if denom.is_zero() {
            return Err(Error::Input(format!("zero denominator in {text:?}")));
        }
        return Ok(Rational::new(numer, denom));
    }
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if (whole.is_empty() && frac.is_empty())
        || !whole.bytes().all(|b| b.is_ascii_digit())
        || !frac.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(Error::Input(format!("not a number: {text:?}")));
    }
    let mantissa: BigInt = format!("{whole}{frac}")
        .parse()
        .map_err(|_| Error::Input(format!("not a number: {text:?}")))?;
    let scale = num_traits::pow(BigInt::from(10u32), frac.len());
    let value = Rational::new(mantissa, scale);
    Ok(if negative { -value } else { value })
}

fn parse_int(text: &str) -> Result<BigInt> {
    let t = text.trim();
    let body = t.strip_prefix('-').unwrap_or(t);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Input(format!("not an integer: {text:?}")));
    }
    t.parse()
        .map_err(|_| Error::Input(format!("not an integer: {text:?}")))
}

/// Exact rendering as `num/den` (always with a denominator).
pub fn format_exact(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Decimal rendering with `places` digits, rounding half away from zero.
pub fn format_decimal(x: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10u32), places);
    let scaled = (x.abs() * Rational::from_integer(scale.clone())).round().to_integer();
    let (whole, frac) = scaled.div_rem(&scale);
    let sign = if x.is_negative() && !scaled.is_zero() {
        "-"
    } else {
        ""
    };
    if places == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = places)
    }
}

pub fn sum<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values.into_iter().fold(Rational::zero(), |acc, v| acc + v)
}

pub fn is_integral(x: &Rational) -> bool {
    x.denom().is_one()
}

/// Serde adapter storing a rational as its `num/den` string.
pub mod serde_rational {
    use super::{format_exact, parse_rational, Rational};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_exact(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }
}

pub mod serde_rational_vec {
    use super::{format_exact, parse_rational, Rational};
    use serde::{de::Error as _, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(values.len()))?;
        for v in values {
            seq.serialize_element(&format_exact(v))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| parse_rational(t).map_err(D::Error::custom))
            .collect()
    }
}
