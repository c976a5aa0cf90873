//! Serialization of exact values as their canonical text forms.

use std::fmt::Display;

use serde::ser::{SerializeSeq, Serializer};

use crate::ore::MatK;

pub fn display<T: Display, S: Serializer>(x: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(x)
}

pub fn display_opt<T: Display, S: Serializer>(x: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

pub fn display_vec<T: Display, S: Serializer>(xs: &[T], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

/// Row-major array of entry strings.
pub fn matrix_rows(m: &MatK) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect())
        .collect()
}

pub fn matrix<S: Serializer>(m: &MatK, s: S) -> Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&matrix_rows(m), s)
}
