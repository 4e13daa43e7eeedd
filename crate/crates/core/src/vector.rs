//! Finitely supported coefficient vectors modelling elements of `l2(N)`,
//! `l2(Z)` and Hardy-space coefficient sequences.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{LabError, Result};
use crate::logscalar::{log_add_exp, LogScalar};

/// Largest entry log-magnitude that norms and distances will materialize.
pub const FLOAT_LOG_LIMIT: f64 = 350.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Indices `>= 1`, so that `T e_1 = 0` for backward shifts.
    Unilateral,
    /// Indices in `Z`.
    Bilateral,
    /// Hardy-space Taylor coefficients, indices `>= 0`.
    HardyCoef,
}

impl Side {
    pub fn min_index(self) -> Option<i64> {
        match self {
            Side::Unilateral => Some(1),
            Side::Bilateral => None,
            Side::HardyCoef => Some(0),
        }
    }

    pub fn admits(self, index: i64) -> bool {
        self.min_index().map_or(true, |m| index >= m)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefVec {
    side: Side,
    #[serde(with = "entry_pairs")]
    entries: BTreeMap<i64, LogScalar>,
}

/// Entries as a list of `[index, value]` pairs; integer map keys do not
/// survive serde's buffering inside tagged enums.
mod entry_pairs {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serializer};

    use crate::logscalar::LogScalar;

    pub fn serialize<S: Serializer>(m: &BTreeMap<i64, LogScalar>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(m.iter())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<i64, LogScalar>, D::Error> {
        Ok(Vec::<(i64, LogScalar)>::deserialize(d)?.into_iter().collect())
    }
}

impl CoefVec {
    pub fn zero(side: Side) -> Self {
        CoefVec {
            side,
            entries: BTreeMap::new(),
        }
    }

    /// The basis vector `e_k`.
    pub fn basis(side: Side, k: i64) -> Result<Self> {
        let mut v = Self::zero(side);
        v.set(k, LogScalar::ONE)?;
        Ok(v)
    }

    pub fn from_complex<I>(side: Side, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let mut v = Self::zero(side);
        for (k, z) in entries {
            v.set(k, LogScalar::from_complex(z))?;
        }
        Ok(v)
    }

    pub fn from_log<I>(side: Side, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, LogScalar)>,
    {
        let mut v = Self::zero(side);
        for (k, s) in entries {
            v.set(k, s)?;
        }
        Ok(v)
    }

    /// Stores `value` at `index`; a zero value removes the entry.
    pub fn set(&mut self, index: i64, value: LogScalar) -> Result<()> {
        if !self.side.admits(index) {
            return Err(LabError::Domain {
                family: "coefficient vector",
                index,
                min: self.side.min_index().unwrap_or(i64::MIN),
            });
        }
        if value.is_zero() {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, value);
        }
        Ok(())
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn get(&self, index: i64) -> LogScalar {
        self.entries.get(&index).copied().unwrap_or(LogScalar::ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, LogScalar)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Smallest and largest stored index.
    pub fn support_bounds(&self) -> Option<(i64, i64)> {
        let lo = *self.entries.keys().next()?;
        let hi = *self.entries.keys().next_back()?;
        Some((lo, hi))
    }

    pub fn scale(&self, a: LogScalar) -> CoefVec {
        if a.is_zero() {
            return CoefVec::zero(self.side);
        }
        CoefVec {
            side: self.side,
            entries: self.entries.iter().map(|(&k, &v)| (k, a * v)).collect(),
        }
    }

    /// Natural log of the l2 norm, computed entirely in log domain.
    /// `-inf` for the zero vector.
    pub fn log_norm(&self) -> f64 {
        let mut logs: Vec<f64> = self.entries.values().map(|v| 2.0 * v.log_mag()).collect();
        logs.sort_by(|a, b| b.total_cmp(a));
        let Some(&top) = logs.first() else {
            return f64::NEG_INFINITY;
        };
        let rel: f64 = logs.iter().map(|l| (l - top).exp()).sum();
        0.5 * (top + rel.ln())
    }

    /// Entries as complex floats, refusing magnitudes beyond [`FLOAT_LOG_LIMIT`].
    pub fn to_complex_entries(&self) -> Result<Vec<(i64, Complex64)>> {
        self.entries
            .iter()
            .map(|(&k, v)| {
                if v.log_mag() > FLOAT_LOG_LIMIT {
                    Err(LabError::Overflow {
                        index: k,
                        log_mag: v.log_mag(),
                    })
                } else {
                    Ok((k, v.to_complex()))
                }
            })
            .collect()
    }

    /// Short content fingerprint used to label provenance in reports.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{:?}", self.side).as_bytes());
        for (k, v) in &self.entries {
            h.update(k.to_le_bytes());
            h.update(v.log_mag().to_le_bytes());
            h.update(v.phase().to_le_bytes());
        }
        let digest = h.finalize();
        let hex: String = digest[..6].iter().map(|b| format!("{b:02x}")).collect();
        match self.support_bounds() {
            Some((lo, hi)) => format!("vec[{} entries, {}..={}, {}]", self.len(), lo, hi, hex),
            None => "vec[0]".to_string(),
        }
    }
}

/// Compensated sum of squared moduli, largest first.
fn sum_sq(mut mags: Vec<f64>) -> f64 {
    mags.sort_by(|a, b| b.total_cmp(a));
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for m in mags {
        let t = m * m;
        let s = sum + t;
        // Neumaier
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

pub fn norm(x: &CoefVec) -> Result<f64> {
    let mags = x
        .to_complex_entries()?
        .into_iter()
        .map(|(_, z)| z.norm())
        .collect();
    Ok(sum_sq(mags).sqrt())
}

fn check_sides(x: &CoefVec, y: &CoefVec) -> Result<()> {
    if x.side != y.side {
        return Err(LabError::SideMismatch {
            left: x.side,
            right: y.side,
        });
    }
    Ok(())
}

pub fn dist(x: &CoefVec, y: &CoefVec) -> Result<f64> {
    check_sides(x, y)?;
    let xs = x.to_complex_entries()?;
    let ys = y.to_complex_entries()?;
    let mut diff: BTreeMap<i64, Complex64> = xs.into_iter().collect();
    for (k, z) in ys {
        *diff.entry(k).or_default() -= z;
    }
    Ok(sum_sq(diff.values().map(|z| z.norm()).collect()).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: CoefVec,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: CoefVec, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(LabError::arg(format!("ball radius must be positive, got {radius}")));
        }
        Ok(Ball { center, radius })
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B({}, {})", self.center, self.radius)
    }
}

/// Open-ball membership: `dist(x, center) < radius`.
pub fn in_ball(x: &CoefVec, b: &Ball) -> Result<bool> {
    Ok(dist(x, &b.center)? < b.radius)
}

/// `a*x + y`, merging index-wise in log domain.
pub fn axpy(a: LogScalar, x: &CoefVec, y: &CoefVec) -> Result<CoefVec> {
    check_sides(x, y)?;
    let mut out = y.clone();
    if a.is_zero() {
        return Ok(out);
    }
    for (&k, &v) in &x.entries {
        let sum = (a * v).add(&y.get(k));
        out.set(k, sum)?;
    }
    Ok(out)
}

impl fmt::Display for CoefVec {
    /// Renders small vectors as a `sum(...)` literal and large ones by fingerprint.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len() > 8 {
            return f.write_str(&self.fingerprint());
        }
        if self.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .entries
            .iter()
            .map(|(k, v)| {
                let z = v.to_complex();
                if (z - Complex64::new(1.0, 0.0)).norm() == 0.0 {
                    format!("e({k})")
                } else if z.im == 0.0 {
                    format!("{}*e({k})", z.re)
                } else {
                    format!("[{},{}]*e({k})", z.re, z.im)
                }
            })
            .collect();
        if terms.len() == 1 {
            f.write_str(&terms[0])
        } else {
            write!(f, "sum({})", terms.join(", "))
        }
    }
}

/// Parses vector literals: `0`, `e(3)`, `2.5*e(1)`, `[0,1]*e(-2)` and
/// `sum(term, term, ...)`.
pub fn parse_vector(side: Side, text: &str) -> Result<CoefVec> {
    let t = text.trim();
    if t == "0" {
        return Ok(CoefVec::zero(side));
    }
    let body = if let Some(inner) = t.strip_prefix("sum(").and_then(|s| s.strip_suffix(')')) {
        inner
    } else {
        t
    };
    let mut v = CoefVec::zero(side);
    for term in split_top_level(body) {
        let (coef, k) = parse_term(&term)?;
        let merged = v.get(k).add(&LogScalar::from_complex(coef));
        v.set(k, merged)?;
    }
    Ok(v)
}

fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '[' => {
                depth += 1;
                cur.push(ch)
            }
            ')' | ']' => {
                depth -= 1;
                cur.push(ch)
            }
            ',' if depth == 0 => out.push(std::mem::take(&mut cur)),
            c => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur);
    }
    out
}

fn parse_term(term: &str) -> Result<(Complex64, i64)> {
    let term = term.trim();
    let (coef, basis) = match term.rsplit_once('*') {
        Some((c, b)) => (crate::text::parse_complex(c)?, b.trim()),
        None => (Complex64::new(1.0, 0.0), term),
    };
    let k = basis
        .strip_prefix("e(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| LabError::parse(format!("expected e(k), got {basis:?}")))?
        .trim()
        .parse::<i64>()
        .map_err(|e| LabError::parse(format!("{basis:?}: {e}")))?;
    Ok((coef, k))
}

/// CSV dump with columns `index,re,im`.
pub fn to_csv(x: &CoefVec) -> Result<String> {
    let mut out = String::from("index,re,im\n");
    for (k, z) in x.to_complex_entries()? {
        out.push_str(&format!("{k},{},{}\n", z.re, z.im));
    }
    Ok(out)
}

/// `ln(exp(2a) + exp(2b)) / 2`, i.e. the log of `sqrt(e^{2a} + e^{2b})`.
pub fn log_hypot(a: f64, b: f64) -> f64 {
    0.5 * log_add_exp(2.0 * a, 2.0 * b)
}
