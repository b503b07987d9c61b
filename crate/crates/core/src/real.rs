//! Serde adapter for `f64` fields that may legitimately be infinite.
//!
//! JSON has no encoding for infinities, so non-finite values are written as
//! the strings `"inf"`, `"-inf"` and `"nan"` and read back losslessly.
//!
//! ```text
//! #[serde(with = "crate::real")]
//! pub t: f64,
//! ```

use serde::de::{self, Visitor};
use serde::{Deserializer, Serializer};

pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    d.deserialize_any(RealVisitor)
}

struct RealVisitor;

impl<'de> Visitor<'de> for RealVisitor {
    type Value = f64;

    fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        f.write_str("a number or one of \"inf\", \"-inf\", \"nan\"")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
        Ok(v)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
        Ok(v as f64)
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
        Ok(v as f64)
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
        match v {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            "nan" => Ok(f64::NAN),
            other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
        }
    }
}

/// Same encoding for `Option<f64>`; `None` maps to JSON `null`.
pub mod option {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => super::serialize(x, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "super")] f64);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

#[cfg(test)]
mod tests {
    use serde::{Deserialize, Serialize};

    #[derive(Debug, PartialEq, Serialize, Deserialize)]
    struct Probe {
        #[serde(with = "crate::real")]
        a: f64,
        #[serde(with = "crate::real::option")]
        b: Option<f64>,
    }

    #[test]
    fn infinities_round_trip() {
        for v in [f64::INFINITY, f64::NEG_INFINITY, 0.1 + 0.2, -3.0] {
            let p = Probe { a: v, b: Some(v) };
            let s = serde_json::to_string(&p).unwrap();
            let back: Probe = serde_json::from_str(&s).unwrap();
            assert_eq!(back, p);
        }
        let p = Probe { a: 1.0, b: None };
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"a":1.0,"b":null}"#);
        assert_eq!(serde_json::from_str::<Probe>(&s).unwrap(), p);
    }

    #[test]
    fn rejects_unknown_tags() {
        assert!(serde_json::from_str::<Probe>(r#"{"a":"big","b":null}"#).is_err());
    }
}
