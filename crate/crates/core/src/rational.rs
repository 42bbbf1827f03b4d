//! Exact rational numbers.
//!
//! Every probability in the crate is a [`Rational`]; there is no floating point
//! anywhere. Values are kept in lowest terms with a positive denominator by
//! `num_rational`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Renders `p/q` in lowest terms, or a bare integer when `q = 1`.
pub fn format(value: &Rational) -> String {
    value.to_string()
}

/// Parses `p/q` or an integer. Signs are allowed only as a leading `-`;
/// whitespace, `+`, decimals and exponents are rejected.
pub fn parse(text: &str) -> Result<Rational> {
    let bad = || Error::MalformedRational(text.to_string());
    let digits = |s: &str| -> Result<BigInt> {
        let body = s.strip_prefix('-').unwrap_or(s);
        if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        s.parse::<BigInt>().map_err(|_| bad())
    };
    match text.split_once('/') {
        None => Ok(Rational::from_integer(digits(text)?)),
        Some((p, q)) => {
            let numer = digits(p)?;
            if q.starts_with('-') {
                return Err(bad());
            }
            let denom = digits(q)?;
            if denom.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(numer, denom))
        }
    }
}

/// True when `0 <= value <= 1`.
pub fn is_probability(value: &Rational) -> bool {
    !value.is_negative() && *value <= Rational::one()
}

/// Serde adapter storing rationals as `"p/q"` strings.
pub mod serde_str {
    use super::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        super::parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for `Vec<Vec<Rational>>`.
pub mod serde_matrix {
    use super::Rational;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for row in rows {
            let cells: Vec<String> = row.iter().map(super::format).collect();
            seq.serialize_element(&cells)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        let rows = Vec::<Vec<String>>::deserialize(d)?;
        rows.iter()
            .map(|row| {
                row.iter()
                    .map(|cell| super::parse(cell).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse("1/4").unwrap(), rat(1, 4));
        assert_eq!(parse("2/8").unwrap(), rat(1, 4));
        assert_eq!(parse("0").unwrap(), zero());
        assert_eq!(parse("1").unwrap(), one());
        assert_eq!(parse("-5/12").unwrap(), rat(-5, 12));
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["", "1/0", "0.25", "1e3", "+1", " 1", "1/", "/2", "1/-2", "a/b", "1/2/3"] {
            assert!(matches!(parse(bad), Err(Error::MalformedRational(_))), "{bad}");
        }
    }

    #[test]
    fn formats_lowest_terms() {
        assert_eq!(format(&rat(10, 24)), "5/12");
        assert_eq!(format(&rat(4, 4)), "1");
        assert_eq!(format(&zero()), "0");
    }
}
