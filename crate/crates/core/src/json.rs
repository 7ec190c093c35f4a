//! Serde adapters that carry arbitrary-precision integers as bare JSON
//! numbers (never as strings or digit arrays).

use std::str::FromStr;

use num_bigint::BigInt;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

fn to_number(v: &BigInt) -> serde_json::Number {
    serde_json::Number::from_str(&v.to_string()).expect("integer literal is a JSON number")
}

fn from_number<E: de::Error>(n: &serde_json::Number) -> Result<BigInt, E> {
    BigInt::from_str(&n.to_string())
        .map_err(|_| E::custom(format!("expected an integer, found {n}")))
}

pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    to_number(v).serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    from_number(&serde_json::Number::deserialize(d)?)
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(to_number).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<serde_json::Number>::deserialize(d)?
            .iter()
            .map(from_number)
            .collect()
    }
}

pub mod nested3 {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<Vec<BigInt>>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.iter().map(to_number).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Vec<BigInt>>>, D::Error> {
        Vec::<Vec<Vec<serde_json::Number>>>::deserialize(d)?
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.iter().map(from_number).collect())
                    .collect()
            })
            .collect()
    }
}

pub fn number(v: &BigInt) -> serde_json::Value {
    serde_json::Value::Number(to_number(v))
}
