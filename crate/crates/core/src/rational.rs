//! Exact rationals and their string interchange form.
//!
//! Every rational crossing a JSON boundary is written as a string, either
//! `"p"` for integers or `"p/q"` in lowest terms with `q > 0`. On input,
//! plain JSON integers are accepted as well.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = num_rational::BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

pub fn fmt_q(x: &Q) -> String {
    // BigRational keeps itself reduced with a positive denominator.
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Integer value of `x`, if it is one and fits in an `i64`.
pub fn as_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

pub fn is_nonneg(x: &Q) -> bool {
    !x.is_negative()
}

pub fn gcd_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// Serde wrapper for one rational.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QStr(pub Q);

impl Serialize for QStr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(&self.0))
    }
}

impl<'de> Deserialize<'de> for QStr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = QStr;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an integer or a string \"p/q\"")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<QStr, E> {
                Ok(QStr(q(v)))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<QStr, E> {
                Ok(QStr(Q::from_integer(BigInt::from(v))))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<QStr, E> {
                parse_q(v).map(QStr).map_err(E::custom)
            }
        }
        d.deserialize_any(V)
    }
}

/// `#[serde(with = "crate::rational::one")]`
pub mod one {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        QStr::deserialize(d).map(|v| v.0)
    }
}

pub mod opt {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(x) => s.serialize_some(&fmt_q(x)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Q>, D::Error> {
        Option::<QStr>::deserialize(d).map(|v| v.map(|v| v.0))
    }
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(x: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(x.iter().map(fmt_q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        Vec::<QStr>::deserialize(d).map(|v| v.into_iter().map(|x| x.0).collect())
    }
}

pub mod map {
    use super::*;

    pub fn serialize<S: Serializer>(
        x: &BTreeMap<String, Q>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(x.iter().map(|(k, v)| (k, fmt_q(v))))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BTreeMap<String, Q>, D::Error> {
        BTreeMap::<String, QStr>::deserialize(d)
            .map(|m| m.into_iter().map(|(k, v)| (k, v.0)).collect())
    }
}

pub mod matrix {
    use super::*;

    pub fn serialize<S: Serializer>(x: &[Vec<Q>], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(x.iter().map(|row| row.iter().map(fmt_q).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Vec<Q>>, D::Error> {
        Vec::<Vec<QStr>>::deserialize(d)
            .map(|m| m.into_iter().map(|r| r.into_iter().map(|x| x.0).collect()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("4/-6").unwrap(), qf(-2, 3));
        assert_eq!(fmt_q(&parse_q("4/-6").unwrap()), "-2/3");
        assert_eq!(fmt_q(&parse_q(" 12 ").unwrap()), "12");
        assert_eq!(fmt_q(&qf(10, 5)), "2");
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
        assert!(parse_q("1.5").is_err());
    }

    #[test]
    fn json_accepts_numbers_and_strings() {
        let v: Vec<QStr> = serde_json::from_str(r#"[3, "-1/2", "7"]"#).unwrap();
        assert_eq!(v, vec![QStr(q(3)), QStr(qf(-1, 2)), QStr(q(7))]);
        assert_eq!(serde_json::to_string(&QStr(qf(-1, 2))).unwrap(), r#""-1/2""#);
    }
}
