//! Exact rational helpers shared by every module: parsing, canonical
//! rendering, decimal rendering for lossy formats, and serde adapters.

use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar.
pub type Q = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("malformed rational `{0}` (expected an integer, `p/q`, or a finite decimal)")]
pub struct ParseRationalError(pub String);

pub fn int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `7`, `-3/4`, or `0.125`. Fractions are reduced.
pub fn parse_rational(text: &str) -> Result<Q, ParseRationalError> {
    let s = text.trim();
    let err = || ParseRationalError(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| err())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(Q::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = whole.starts_with('-');
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !whole_digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let digits = format!("{whole_digits}{frac}");
        let mut num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
            .map_err(|_| err())?;
        if negative {
            num = -num;
        }
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        return Ok(Q::new(num, den));
    }
    BigInt::from_str(s).map(Q::from_integer).map_err(|_| err())
}

/// Canonical text: reduced `p/q`, or the bare integer when `q = 1`.
pub fn render(value: &Q) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn render_all(values: &[Q]) -> Vec<String> {
    values.iter().map(render).collect()
}

/// Decimal rendering with `digits` significant digits, rounded half away
/// from zero. Zero renders as `0`.
pub fn render_decimal(value: &Q, digits: usize) -> String {
    assert!(digits > 0);
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let abs = value.abs();
    let ten = BigInt::from(10u32);

    // Find exponent e with 10^e <= abs < 10^(e+1).
    let mut exp: i64 = abs.numer().to_string().len() as i64 - abs.denom().to_string().len() as i64;
    let pow10 = |e: i64| -> Q {
        if e >= 0 {
            Q::from_integer(ten.pow(e as u32))
        } else {
            Q::new(BigInt::one(), ten.pow((-e) as u32))
        }
    };
    while abs < pow10(exp) {
        exp -= 1;
    }
    while abs >= pow10(exp + 1) {
        exp += 1;
    }

    // Scale so that `digits` digits sit left of the point, then round.
    let shift = digits as i64 - 1 - exp;
    let scaled = &abs * pow10(shift);
    let (q, r) = scaled.numer().div_rem(scaled.denom());
    let mut mantissa = q;
    if BigInt::from(2u32) * r >= *scaled.denom() {
        mantissa += 1;
    }
    let mut shift = shift;
    if mantissa.to_string().len() > digits {
        // Rounding carried into a new leading digit.
        mantissa /= &ten;
        shift -= 1;
    }
    let mut text = mantissa.to_string();
    let out = if shift <= 0 {
        text.extend(std::iter::repeat_n('0', (-shift) as usize));
        text
    } else {
        let shift = shift as usize;
        if text.len() <= shift {
            let pad = "0".repeat(shift - text.len());
            format!("0.{pad}{text}")
        } else {
            let (a, b) = text.split_at(text.len() - shift);
            format!("{a}.{b}")
        }
    };
    if negative {
        format!("-{out}")
    } else {
        out
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Q>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn sign(value: &Q) -> Sign {
    if value.is_zero() {
        Sign::NoSign
    } else if value.is_positive() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Serde adapter: one rational as its canonical string.
pub mod serde_q {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&render(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter: a vector of rationals as strings.
pub mod serde_q_vec {
    use super::*;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(values: &[Q], s: S) -> Result<S::Ok, S::Error> {
        render_all(values).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let texts = Vec::<String>::deserialize(d)?;
        texts
            .iter()
            .map(|t| parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("1/2").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("4/2").unwrap(), int(2));
        assert_eq!(parse_rational(" -3 ").unwrap(), int(-3));
        assert_eq!(parse_rational("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse_rational("-.5").unwrap(), ratio(-1, 2));
        for bad in ["", "1/0", "a", "1.", "1/2/3", "0.x"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn render_reduces() {
        assert_eq!(render(&ratio(2, 2)), "1");
        assert_eq!(render(&ratio(3, 6)), "1/2");
        assert_eq!(render(&ratio(-4, 6)), "-2/3");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(render_decimal(&ratio(1, 3), 17), "0.33333333333333333");
        assert_eq!(render_decimal(&ratio(2, 3), 17), "0.66666666666666667");
        assert_eq!(render_decimal(&int(4), 17), "4.0000000000000000");
        assert_eq!(render_decimal(&ratio(1, 2), 3), "0.500");
        assert_eq!(render_decimal(&ratio(-3, 2), 2), "-1.5");
        assert_eq!(render_decimal(&ratio(999, 1000), 2), "1.0");
        assert_eq!(render_decimal(&int(1234), 2), "1200");
        assert_eq!(render_decimal(&ratio(1, 1000), 2), "0.0010");
        assert_eq!(render_decimal(&Q::zero(), 5), "0");
    }
}
