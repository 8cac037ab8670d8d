//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `(-1)^e` as a rational.
pub fn sign_pow(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Inverse of [`format`]. Accepts an optional leading ASCII or Unicode minus.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-').or_else(|| s.strip_prefix('\u{2212}')) {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    let value = match body.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(body.trim().parse().map_err(|_| bad())?),
    };
    Ok(if neg { -value } else { value })
}

/// Serde adapter storing rationals as their canonical text form.
pub mod serde_text {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

/// Writes `coeff·body` in the house style used by every text serializer:
/// the leading term carries a bare `−`, later terms are joined with ` + ` or
/// ` − `, and a unit coefficient is omitted unless `body` is empty.
pub(crate) fn write_terms<'a, I>(terms: I) -> String
where
    I: IntoIterator<Item = (&'a Rational, String)>,
{
    let mut out = String::new();
    for (i, (coeff, body)) in terms.into_iter().enumerate() {
        let neg = coeff.is_negative();
        match (i, neg) {
            (0, true) => out.push('\u{2212}'),
            (0, false) => {}
            (_, true) => out.push_str(" \u{2212} "),
            (_, false) => out.push_str(" + "),
        }
        let mag = coeff.abs();
        if body.is_empty() {
            out.push_str(&format(&mag));
        } else if mag.is_one() {
            out.push_str(&body);
        } else {
            out.push_str(&format(&mag));
            out.push('·');
            out.push_str(&body);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Splits a text produced by [`write_terms`] back into signed `(coeff, body)` pairs.
pub(crate) fn split_terms(s: &str) -> Result<Vec<(Rational, String)>> {
    let s = s.trim();
    if s == "0" {
        return Ok(Vec::new());
    }
    let mut pieces: Vec<(bool, String)> = Vec::new();
    let mut rest = s;
    let mut neg = false;
    if let Some(r) = rest.strip_prefix('\u{2212}').or_else(|| rest.strip_prefix('-')) {
        if !r.starts_with('[') {
            neg = true;
            rest = r;
        }
    }
    loop {
        let plus = rest.find(" + ");
        let minus = rest.find(" \u{2212} ");
        let next = match (plus, minus) {
            (Some(a), Some(b)) => Some(if a < b { (a, false, 3) } else { (b, true, 2 + '\u{2212}'.len_utf8()) }),
            (Some(a), None) => Some((a, false, 3)),
            (None, Some(b)) => Some((b, true, 2 + '\u{2212}'.len_utf8())),
            (None, None) => None,
        };
        match next {
            Some((pos, next_neg, skip)) => {
                pieces.push((neg, rest[..pos].to_string()));
                neg = next_neg;
                rest = &rest[pos + skip..];
            }
            None => {
                pieces.push((neg, rest.to_string()));
                break;
            }
        }
    }
    pieces
        .into_iter()
        .map(|(neg, piece)| {
            let piece = piece.trim();
            let (coeff, body) = match piece.split_once('·') {
                Some((head, tail)) if looks_numeric(head) => (parse(head)?, tail.to_string()),
                _ if looks_numeric(piece) => (parse(piece)?, String::new()),
                _ => (Rational::one(), piece.to_string()),
            };
            Ok((if neg { -coeff } else { coeff }, body))
        })
        .collect()
}

fn looks_numeric(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_digit() || c == '/')
}
