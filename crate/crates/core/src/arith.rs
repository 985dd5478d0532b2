//! Small exact-arithmetic helpers shared by every module, plus the serde glue
//! that keeps integers exact on the JSON boundary.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// `floor(sqrt(n))` for `n >= 0`.
pub fn isqrt(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_negative());
    n.sqrt()
}

pub fn floor_rat(q: &BigRational) -> BigInt {
    q.numer().div_floor(q.denom())
}

pub fn ceil_rat(q: &BigRational) -> BigInt {
    -((-q.numer()).div_floor(q.denom()))
}

/// Renders an exact rational as `n` or `p/q`.
pub fn fmt_rat(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// JSON helpers: integers are written as JSON numbers of arbitrary length and
/// read back only if the literal is an exact integer (no fraction, no exponent).
pub mod json {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use std::str::FromStr;

    #[derive(Clone, Debug, PartialEq, Eq)]
    pub struct JsonInt(pub BigInt);

    impl Serialize for JsonInt {
        fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
            let n = serde_json::Number::from_str(&self.0.to_string())
                .map_err(serde::ser::Error::custom)?;
            n.serialize(s)
        }
    }

    impl<'de> Deserialize<'de> for JsonInt {
        fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
            let n = serde_json::Number::deserialize(d)?;
            let text = n.to_string();
            if text.contains(['.', 'e', 'E']) {
                return Err(D::Error::custom(format!("expected an exact integer, found {text}")));
            }
            text.parse::<BigInt>()
                .map(JsonInt)
                .map_err(|_| D::Error::custom(format!("expected an exact integer, found {text}")))
        }
    }

    pub mod scalar {
        use super::*;
        pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
            JsonInt(v.clone()).serialize(s)
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
            Ok(JsonInt::deserialize(d)?.0)
        }
    }

    pub mod vec {
        use super::*;
        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
            let w: Vec<JsonInt> = v.iter().cloned().map(JsonInt).collect();
            w.serialize(s)
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
            Ok(Vec::<JsonInt>::deserialize(d)?.into_iter().map(|j| j.0).collect())
        }
    }

    pub mod matrix {
        use super::*;
        pub fn serialize<S: Serializer>(m: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
            let w: Vec<Vec<JsonInt>> = m
                .iter()
                .map(|row| row.iter().cloned().map(JsonInt).collect())
                .collect();
            w.serialize(s)
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Vec<BigInt>>, D::Error> {
            Ok(Vec::<Vec<JsonInt>>::deserialize(d)?
                .into_iter()
                .map(|row| row.into_iter().map(|j| j.0).collect())
                .collect())
        }
    }

    /// Rationals travel as strings, `"n"` or `"p/q"`.
    pub mod rational {
        use super::*;
        pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
            s.serialize_str(&fmt_rat(q))
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
            let text = String::deserialize(d)?;
            parse_rat(&text).ok_or_else(|| D::Error::custom(format!("bad rational `{text}`")))
        }
    }

    pub mod opt_rational {
        use super::*;
        pub fn serialize<S: Serializer>(
            q: &Option<BigRational>,
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            match q {
                Some(q) => s.serialize_some(&fmt_rat(q)),
                None => s.serialize_none(),
            }
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Option<BigRational>, D::Error> {
            match Option::<String>::deserialize(d)? {
                Some(text) => parse_rat(&text)
                    .map(Some)
                    .ok_or_else(|| D::Error::custom(format!("bad rational `{text}`"))),
                None => Ok(None),
            }
        }
    }

    pub mod int_map {
        use super::*;
        use std::collections::BTreeMap;
        pub fn serialize<S: Serializer>(
            m: &BTreeMap<String, BigInt>,
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            let w: BTreeMap<&String, JsonInt> =
                m.iter().map(|(k, v)| (k, JsonInt(v.clone()))).collect();
            w.serialize(s)
        }
        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<BTreeMap<String, BigInt>, D::Error> {
            Ok(BTreeMap::<String, JsonInt>::deserialize(d)?
                .into_iter()
                .map(|(k, v)| (k, v.0))
                .collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_and_ceil_of_negative_fractions() {
        assert_eq!(floor_rat(&rat(-7, 2)), int(-4));
        assert_eq!(ceil_rat(&rat(-7, 2)), int(-3));
        assert_eq!(floor_rat(&rat(6, 3)), int(2));
        assert_eq!(ceil_rat(&rat(6, 3)), int(2));
    }

    #[test]
    fn rational_text_round_trip() {
        assert_eq!(fmt_rat(&rat(6, 7)), "6/7");
        assert_eq!(fmt_rat(&rat(12, 2)), "6");
        assert_eq!(parse_rat("-3/6"), Some(rat(-1, 2)));
        assert_eq!(parse_rat("1/0"), None);
    }

    #[test]
    fn json_rejects_floats() {
        let ok: json::JsonInt = serde_json::from_str("123456789012345678901234567890").unwrap();
        assert_eq!(ok.0.to_string(), "123456789012345678901234567890");
        assert!(serde_json::from_str::<json::JsonInt>("1.0").is_err());
        assert!(serde_json::from_str::<json::JsonInt>("1e3").is_err());
    }
}
