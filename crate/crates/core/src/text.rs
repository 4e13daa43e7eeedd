//! Parsing helpers for the textual family specs (`"exp_pow a=0.5"`) and the
//! lenient number forms accepted in config files (decimal strings, plain
//! numbers, `[re,im]` pairs).

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::Deserialize;
use serde_json::Value;

use crate::error::{LabError, Result};

/// Splits `"tag k1=v1 k2=v2"` into the tag and its parameters. Whitespace
/// inside brackets does not split.
pub fn parse_kv(spec: &str) -> Result<(String, BTreeMap<String, String>)> {
    let mut tokens = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in spec.trim().chars() {
        match ch {
            '[' | '(' => {
                depth += 1;
                cur.push(ch);
            }
            ']' | ')' => {
                depth -= 1;
                cur.push(ch);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    tokens.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if depth != 0 {
        return Err(LabError::parse(format!("unbalanced brackets in {spec:?}")));
    }
    if !cur.is_empty() {
        tokens.push(cur);
    }
    let mut it = tokens.into_iter();
    let tag = it
        .next()
        .ok_or_else(|| LabError::parse("empty family spec"))?;
    let mut params = BTreeMap::new();
    for tok in it {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| LabError::parse(format!("expected key=value, got {tok:?}")))?;
        params.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok((tag, params))
}

fn json(text: &str) -> Result<Value> {
    serde_json::from_str(text.trim()).map_err(|e| LabError::parse(format!("{text:?}: {e}")))
}

pub fn parse_real(text: &str) -> Result<f64> {
    real_from_value(&json(text)?)
}

pub fn parse_complex(text: &str) -> Result<Complex64> {
    complex_from_value(&json(text)?)
}

pub fn parse_real_list(text: &str) -> Result<Vec<f64>> {
    match json(text)? {
        Value::Array(items) => items.iter().map(real_from_value).collect(),
        other => Err(LabError::parse(format!("expected a list, got {other}"))),
    }
}

pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>> {
    match json(text)? {
        Value::Array(items) => items.iter().map(complex_from_value).collect(),
        other => Err(LabError::parse(format!("expected a list, got {other}"))),
    }
}

fn real_from_value(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| LabError::parse(format!("bad number {n}"))),
        Value::String(s) => s
            .trim()
            .parse::<f64>()
            .map_err(|e| LabError::parse(format!("{s:?}: {e}"))),
        other => Err(LabError::parse(format!("expected a real number, got {other}"))),
    }
}

fn complex_from_value(v: &Value) -> Result<Complex64> {
    match v {
        Value::Array(pair) if pair.len() == 2 => Ok(Complex64::new(
            real_from_value(&pair[0])?,
            real_from_value(&pair[1])?,
        )),
        Value::String(s) if s.trim_start().starts_with('[') => parse_complex(s),
        other => Ok(Complex64::new(real_from_value(other)?, 0.0)),
    }
}

pub(crate) fn de_f64<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    let v = Value::deserialize(d)?;
    real_from_value(&v).map_err(de::Error::custom)
}

pub(crate) fn de_complex<'de, D: Deserializer<'de>>(
    d: D,
) -> std::result::Result<Complex64, D::Error> {
    let v = Value::deserialize(d)?;
    complex_from_value(&v).map_err(de::Error::custom)
}

pub(crate) fn de_f64_vec<'de, D: Deserializer<'de>>(
    d: D,
) -> std::result::Result<Vec<f64>, D::Error> {
    match Value::deserialize(d)? {
        Value::Array(items) => items
            .iter()
            .map(real_from_value)
            .collect::<Result<_>>()
            .map_err(de::Error::custom),
        Value::String(s) => parse_real_list(&s).map_err(de::Error::custom),
        other => Err(de::Error::custom(format!("expected a list, got {other}"))),
    }
}

pub(crate) fn de_complex_vec<'de, D: Deserializer<'de>>(
    d: D,
) -> std::result::Result<Vec<Complex64>, D::Error> {
    match Value::deserialize(d)? {
        Value::Array(items) => items
            .iter()
            .map(complex_from_value)
            .collect::<Result<_>>()
            .map_err(de::Error::custom),
        Value::String(s) => parse_complex_list(&s).map_err(de::Error::custom),
        other => Err(de::Error::custom(format!("expected a list, got {other}"))),
    }
}
