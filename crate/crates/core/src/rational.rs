//! Exact rational helpers and their `"p/q"` string encoding.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a plain integer.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Q::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Q::from_integer(n))
        }
    }
}

pub fn fmt_q(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn fmt_r64(q: &Rational64) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_r64(s: &str) -> Result<Rational64> {
    let q = parse_q(s)?;
    let conv = |b: &BigInt| -> Result<i64> {
        i64::try_from(b.clone()).map_err(|_| Error::Parse(format!("rational {s:?} out of range")))
    };
    Ok(Rational64::new(conv(q.numer())?, conv(q.denom())?))
}

/// Textual sign-aware coefficient used by the polynomial printers.
pub(crate) fn push_term(out: &mut String, coeff: &Q, monomial: &str) {
    let neg = coeff.is_negative();
    let abs = coeff.abs();
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if monomial.is_empty() {
        out.push_str(&fmt_q(&abs));
    } else {
        if !abs.is_one() {
            out.push_str(&fmt_q(&abs));
            out.push('*');
        }
        out.push_str(monomial);
    }
}

/// Serde adapter: `BigRational` as a `"p/q"` string.
pub mod q_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let raw = String::deserialize(d)?;
        parse_q(&raw).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter: `Rational64` as a `"p/q"` string.
pub mod r64_string {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_r64(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational64, D::Error> {
        let raw = String::deserialize(d)?;
        parse_r64(&raw).map_err(serde::de::Error::custom)
    }
}
