//! Serde adapters that write big integers as decimal strings.

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};

pub mod big {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

pub mod big_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(ToString::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let items = Vec::<String>::deserialize(d)?;
        items.iter().map(|t| t.parse().map_err(D::Error::custom)).collect()
    }
}

pub mod opt_pair {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<(BigInt, BigInt)>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some((a, b)) => s.collect_seq([a.to_string(), b.to_string()]),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<(BigInt, BigInt)>, D::Error> {
        let v = Option::<[String; 2]>::deserialize(d)?;
        v.map(|[a, b]| Ok((a.parse().map_err(D::Error::custom)?, b.parse().map_err(D::Error::custom)?))).transpose()
    }
}

pub mod opt_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(items) => s.collect_seq(items.iter().map(ToString::to_string)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigInt>>, D::Error> {
        let v = Option::<Vec<String>>::deserialize(d)?;
        v.map(|items| items.iter().map(|t| t.parse().map_err(D::Error::custom)).collect()).transpose()
    }
}
