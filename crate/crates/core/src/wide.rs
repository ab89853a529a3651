//! Serde adapter carrying `i128` fields as JSON integers within `i64` range.

use serde::{de::Error as _, ser::Error as _, Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(v: &i128, s: S) -> Result<S::Ok, S::Error> {
    let narrow = i64::try_from(*v).map_err(|_| S::Error::custom(format!("{v} exceeds 64 bits")))?;
    s.serialize_i64(narrow)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<i128, D::Error> {
    i64::deserialize(d).map(i128::from).map_err(D::Error::custom)
}
