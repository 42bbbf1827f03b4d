//! Entry states of a derived assignment matrix.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format, parse, Rational};

/// What is known about one matrix entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EntryValue {
    Known(Rational),
    /// `constant + slope * parameter` with the parameter confined to `range`.
    Affine { constant: Rational, slope: Rational, parameter: String, range: (Rational, Rational) },
    Interval(Rational, Rational),
    Unknown,
}

impl EntryValue {
    pub fn known(&self) -> Option<&Rational> {
        match self {
            EntryValue::Known(v) => Some(v),
            _ => None,
        }
    }

    /// Tightest closed interval containing the entry, if bounded.
    pub fn interval(&self) -> Option<(Rational, Rational)> {
        match self {
            EntryValue::Known(v) => Some((v.clone(), v.clone())),
            EntryValue::Interval(lo, hi) => Some((lo.clone(), hi.clone())),
            EntryValue::Affine { constant, slope, range, .. } => {
                let a = constant + slope * &range.0;
                let b = constant + slope * &range.1;
                Some(if a <= b { (a, b) } else { (b, a) })
            }
            EntryValue::Unknown => None,
        }
    }
}

fn write_affine(f: &mut fmt::Formatter<'_>, constant: &Rational, slope: &Rational, parameter: &str) -> fmt::Result {
    let term = if slope.abs().is_one() { parameter.to_string() } else { format!("{}{parameter}", format(&slope.abs())) };
    if constant.is_zero() {
        if slope.is_negative() {
            write!(f, "-{term}")
        } else {
            write!(f, "{term}")
        }
    } else {
        let sign = if slope.is_negative() { '-' } else { '+' };
        write!(f, "{}{sign}{term}", format(constant))
    }
}

impl fmt::Display for EntryValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntryValue::Known(v) => write!(f, "{}", format(v)),
            EntryValue::Affine { constant, slope, parameter, .. } => write_affine(f, constant, slope, parameter),
            EntryValue::Interval(lo, hi) => write!(f, "[{},{}]", format(lo), format(hi)),
            EntryValue::Unknown => write!(f, "?"),
        }
    }
}

/// An expected entry as written in a script: a rational, `?`, or an affine
/// expression in the node's parameter such as `5/12-x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExpectedEntry {
    Any,
    Known(Rational),
    Affine { constant: Rational, slope: Rational },
}

impl ExpectedEntry {
    pub fn parse(text: &str, parameter: Option<&str>) -> Result<Self> {
        let t = text.trim();
        if t == "?" {
            return Ok(ExpectedEntry::Any);
        }
        let Some(p) = parameter.filter(|p| t.contains(*p)) else {
            return parse(t).map(ExpectedEntry::Known);
        };
        let bad = || Error::Input(format!("cannot read expected entry `{t}`"));
        let body = t.strip_suffix(p).ok_or_else(bad)?;
        // body is "", "-", "c+", "c-", optionally followed by a coefficient
        let split = body.rfind(['+', '-']);
        let (constant, sign, coef) = match split {
            Some(k) => (&body[..k], &body[k..k + 1], &body[k + 1..]),
            None => ("", "+", body),
        };
        let constant = if constant.is_empty() { Rational::zero() } else { parse(constant)? };
        let mut slope = if coef.is_empty() { Rational::one() } else { parse(coef)? };
        if sign == "-" {
            slope = -slope;
        }
        Ok(ExpectedEntry::Affine { constant, slope })
    }

    pub fn matches(&self, value: &EntryValue) -> bool {
        match (self, value) {
            (ExpectedEntry::Any, _) => true,
            (ExpectedEntry::Known(a), EntryValue::Known(b)) => a == b,
            (ExpectedEntry::Affine { constant, slope }, EntryValue::Affine { constant: c, slope: s, .. }) => {
                constant == c && slope == s
            }
            _ => false,
        }
    }
}

impl fmt::Display for ExpectedEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExpectedEntry::Any => write!(f, "?"),
            ExpectedEntry::Known(v) => write!(f, "{}", format(v)),
            ExpectedEntry::Affine { constant, slope } => write_affine(f, constant, slope, "x"),
        }
    }
}
