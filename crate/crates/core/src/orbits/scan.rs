//! Ball-membership scans along scaled orbits `lambda_n T^n x`.
//!
//! Materializing `T^n x` for every `n` costs `O(|supp x|)` per step. The
//! scanner instead evaluates the orbit only on the window of indices where the
//! ball center lives and bounds everything else by prefix and suffix sums of
//! `|x_i|^2` times the largest possible weight product. Most indices are
//! decided from the window alone; the rest are refined entry by entry, and a
//! decision closer than a relative `1e-9` to the radius falls back to the
//! direct computation.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bitset::Bitset;
use crate::error::{LabError, Result};
use crate::logscalar::log_add_exp;
use crate::sequence::ScalingSeq;
use crate::shift::{scaled_orbit_point, ProductTable, ShiftOp};
use crate::vector::{in_ball, Ball, CoefVec, Side};

const BAND: f64 = 1e-9;
const CHUNK: u64 = 2048;

/// Where a hitting set came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub vector: String,
    pub sequence: String,
    pub operator: String,
    pub center: String,
    pub radius: f64,
}

impl Provenance {
    pub fn explicit() -> Self {
        Provenance {
            vector: "explicit".into(),
            sequence: "explicit".into(),
            operator: "explicit".into(),
            center: "explicit".into(),
            radius: 0.0,
        }
    }
}

/// A subset of `[1, n_max]`.
#[derive(Clone, Debug, PartialEq)]
pub struct HittingSet {
    bits: Bitset,
    n_max: u64,
    provenance: Provenance,
}

impl HittingSet {
    pub fn empty(n_max: u64, provenance: Provenance) -> Self {
        HittingSet {
            bits: Bitset::new(n_max as usize + 1),
            n_max,
            provenance,
        }
    }

    /// Set with explicit members; values outside `[1, n_max]` are rejected.
    pub fn from_indices<I: IntoIterator<Item = u64>>(n_max: u64, indices: I) -> Result<Self> {
        let mut h = Self::empty(n_max, Provenance::explicit());
        for n in indices {
            if n == 0 || n > n_max {
                return Err(LabError::arg(format!("index {n} outside [1, {n_max}]")));
            }
            h.bits.set(n as usize);
        }
        Ok(h)
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn contains(&self, n: u64) -> bool {
        self.bits.contains(n as usize)
    }

    pub fn len(&self) -> usize {
        self.bits.count()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.bits.iter().map(|n| n as u64)
    }

    pub fn indices(&self) -> Vec<u64> {
        self.iter().collect()
    }

    pub(crate) fn bits(&self) -> &Bitset {
        &self.bits
    }

    /// One member per line under an `n` header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n\n");
        for n in self.iter() {
            s.push_str(&n.to_string());
            s.push('\n');
        }
        s
    }
}

/// Precomputed state for deciding `lambda_n T^n x in B(y, eps)`.
pub struct OrbitScanner<'a> {
    lam: &'a ScalingSeq,
    op: &'a ShiftOp,
    x: &'a CoefVec,
    ball: &'a Ball,
    idx: Vec<i64>,
    logmag: Vec<f64>,
    phase: Vec<f64>,
    /// `prefix[k] = ln sum_{s<k} |x_s|^2`
    prefix: Vec<f64>,
    /// `suffix[k] = ln sum_{s>=k} |x_s|^2`
    suffix: Vec<f64>,
    table: ProductTable,
    y: Vec<(i64, Complex64)>,
    y_norm_sq: f64,
    /// A single orbit coefficient above `exp(log_cap)` puts the point outside.
    log_cap: f64,
    ln_p: f64,
    arg_p: f64,
    ln_sup: f64,
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, t: f64) {
        let s = self.sum + t;
        self.comp += if self.sum.abs() >= t.abs() {
            (self.sum - s) + t
        } else {
            (t - s) + self.sum
        };
        self.sum = s;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

enum Decision {
    In,
    Out,
    Ambiguous,
}

impl<'a> OrbitScanner<'a> {
    pub fn new(
        x: &'a CoefVec,
        lam: &'a ScalingSeq,
        op: &'a ShiftOp,
        ball: &'a Ball,
        n_max: u64,
    ) -> Result<Self> {
        for v in [x, &ball.center] {
            if v.side() != op.side {
                return Err(LabError::SideMismatch {
                    left: op.side,
                    right: v.side(),
                });
            }
        }
        let mut idx = Vec::with_capacity(x.len());
        let mut logmag = Vec::with_capacity(x.len());
        let mut phase = Vec::with_capacity(x.len());
        for (i, v) in x.iter() {
            idx.push(i);
            logmag.push(v.log_mag());
            phase.push(v.phase());
        }
        let len = idx.len();
        let mut prefix = vec![f64::NEG_INFINITY; len + 1];
        for k in 0..len {
            prefix[k + 1] = log_add_exp(prefix[k], 2.0 * logmag[k]);
        }
        let mut suffix = vec![f64::NEG_INFINITY; len + 1];
        for k in (0..len).rev() {
            suffix[k] = log_add_exp(suffix[k + 1], 2.0 * logmag[k]);
        }
        let table = op.table_for(x, n_max)?;
        let y = ball.center.to_complex_entries()?;
        let y_norm_sq = crate::vector::norm(&ball.center)?.powi(2);
        let p = op.premultiplier;
        Ok(OrbitScanner {
            lam,
            op,
            x,
            ball,
            idx,
            logmag,
            phase,
            prefix,
            suffix,
            table,
            y,
            y_norm_sq,
            log_cap: (y_norm_sq.sqrt() + ball.radius).ln(),
            ln_p: p.norm().ln(),
            arg_p: p.im.atan2(p.re),
            ln_sup: op.weights.sup().ln(),
        })
    }

    /// `lambda_n` scale and phase, or `None` when the orbit point is zero.
    fn front(&self, n: u64) -> Result<Option<(f64, f64)>> {
        let l = self.lam.eval_log(n)?;
        if l.is_zero() || self.ln_p == f64::NEG_INFINITY || self.idx.is_empty() {
            return Ok(None);
        }
        let nf = n as f64;
        Ok(Some((l.log_mag() + nf * self.ln_p, l.phase() + nf * self.arg_p)))
    }

    /// Orbit coefficient from stored entry `k` at power `n`, in log form.
    fn coef(&self, k: usize, n: u64, s: f64) -> Result<f64> {
        let i = self.idx[k];
        let w = self.table.ln_product(i - n as i64 + 1, i)?;
        Ok(s + w + self.logmag[k])
    }

    fn positions(&self, n: u64) -> (usize, usize) {
        let ni = n as i64;
        let (jlo, jhi) = match (self.op.side, self.y.first(), self.y.last()) {
            (Side::Unilateral, _, Some(&(hi, _))) => (1, hi),
            (Side::Unilateral, _, None) => (1, 0),
            (_, Some(&(lo, _)), Some(&(hi, _))) => (lo, hi),
            _ => (1, 0),
        };
        let a = self.idx.partition_point(|&i| i < ni + jlo);
        let b = if jhi >= jlo {
            self.idx.partition_point(|&i| i <= ni + jhi)
        } else {
            a
        };
        (a, b)
    }

    /// Exact squared distance on the window plus remaining-tail bound, with
    /// optional refinement until a decision (or full accuracy) is reached.
    fn evaluate(&self, n: u64, eps_sq: Option<f64>) -> Result<(f64, f64, Option<Decision>)> {
        let Some((s, ph)) = self.front(n)? else {
            return Ok((self.y_norm_sq, 0.0, None));
        };
        let ni = n as i64;
        let (a, b) = self.positions(n);
        let bilateral = self.op.side == Side::Bilateral;
        let thresholds = eps_sq.map(|e| (e * (1.0 - BAND), e * (1.0 + BAND)));

        let mut d2 = Neumaier::default();
        let mut yk = 0;
        for k in a..b {
            let j = self.idx[k] - ni;
            while yk < self.y.len() && self.y[yk].0 < j {
                d2.add(self.y[yk].1.norm_sqr());
                yk += 1;
            }
            let l = self.coef(k, n, s)?;
            if thresholds.is_some() && l > self.log_cap {
                return Ok((f64::INFINITY, 0.0, Some(Decision::Out)));
            }
            let c = Complex64::from_polar(l.exp(), ph + self.phase[k]);
            if yk < self.y.len() && self.y[yk].0 == j {
                d2.add((c - self.y[yk].1).norm_sqr());
                yk += 1;
            } else {
                d2.add(c.norm_sqr());
            }
        }
        for &(_, v) in &self.y[yk..] {
            d2.add(v.norm_sqr());
        }

        let nf = n as f64;
        let lead = 2.0 * (s + nf * self.ln_sup);
        let (mut head, mut tail) = (if bilateral { a } else { 0 }, b);
        let bound = |head: usize, tail: usize| {
            let h = if bilateral {
                (lead + self.prefix[head]).exp()
            } else {
                0.0
            };
            h + (lead + self.suffix[tail]).exp()
        };
        loop {
            let total = d2.value();
            let r2 = bound(head, tail);
            if let Some((lo, hi)) = thresholds {
                if total >= hi {
                    return Ok((total, r2, Some(Decision::Out)));
                }
                if total + r2 < lo {
                    return Ok((total, r2, Some(Decision::In)));
                }
            } else if r2 <= 1e-30 * total || r2 == 0.0 {
                return Ok((total, r2, None));
            }
            let more_tail = tail < self.idx.len();
            let more_head = bilateral && head > 0;
            if !more_tail && !more_head {
                let d = if thresholds.is_some() {
                    Some(Decision::Ambiguous)
                } else {
                    None
                };
                return Ok((total, 0.0, d));
            }
            if more_tail {
                let l = self.coef(tail, n, s)?;
                if thresholds.is_some() && l > self.log_cap {
                    return Ok((f64::INFINITY, 0.0, Some(Decision::Out)));
                }
                d2.add((2.0 * l).exp());
                tail += 1;
            }
            if more_head {
                head -= 1;
                let l = self.coef(head, n, s)?;
                if thresholds.is_some() && l > self.log_cap {
                    return Ok((f64::INFINITY, 0.0, Some(Decision::Out)));
                }
                d2.add((2.0 * l).exp());
            }
        }
    }

    /// Whether `lambda_n T^n x` lies in the open ball. Indices below the
    /// sequence's domain are never members.
    pub fn contains(&self, n: u64) -> Result<bool> {
        if n < self.lam.min_index() {
            return Ok(false);
        }
        let eps_sq = self.ball.radius * self.ball.radius;
        match self.evaluate(n, Some(eps_sq))? {
            (_, _, Some(Decision::In)) => Ok(true),
            (_, _, Some(Decision::Out)) => Ok(false),
            (d2, _, _) => {
                if (d2 - eps_sq).abs() > BAND * eps_sq {
                    return Ok(d2 < eps_sq);
                }
                in_ball(&scaled_orbit_point(self.lam, self.op, n, self.x)?, self.ball)
            }
        }
    }

    /// Upper bound on `||lambda_n T^n x - y||`, tight to about 1e-15 relative.
    pub fn distance_upper(&self, n: u64) -> Result<f64> {
        let (d2, r2, _) = self.evaluate(n, None)?;
        Ok((d2 + r2).sqrt())
    }
}

/// `{n in [1, n_max] : lambda_n T^n x in b}`.
pub fn hitting_set(
    x: &CoefVec,
    lam: &ScalingSeq,
    op: &ShiftOp,
    b: &Ball,
    n_max: u64,
) -> Result<HittingSet> {
    if n_max == 0 {
        return Err(LabError::pre("horizon must be at least 1"));
    }
    let scanner = OrbitScanner::new(x, lam, op, b, n_max)?;
    let chunks = n_max.div_ceil(CHUNK);
    let parts: Vec<Vec<u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = 1 + c * CHUNK;
            let hi = (lo + CHUNK - 1).min(n_max);
            let mut hits = Vec::new();
            for n in lo..=hi {
                if scanner.contains(n)? {
                    hits.push(n);
                }
            }
            Ok(hits)
        })
        .collect::<Result<_>>()?;
    let provenance = Provenance {
        vector: x.fingerprint(),
        sequence: lam.to_string(),
        operator: op.to_string(),
        center: b.center.fingerprint(),
        radius: b.radius,
    };
    let mut h = HittingSet::empty(n_max, provenance);
    for n in parts.into_iter().flatten() {
        h.bits.set(n as usize);
    }
    Ok(h)
}

/// Return times `n <= n_max` with `||T^n x - x|| < eps`.
pub fn recurrence_scan(op: &ShiftOp, x: &CoefVec, eps: f64, n_max: u64) -> Result<Vec<u64>> {
    let ball = Ball::new(x.clone(), eps)?;
    let one = ScalingSeq::constant(1.0);
    Ok(hitting_set(x, &one, op, &ball, n_max)?.indices())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::WeightSeq;
    use crate::vector::dist;

    fn uni(entries: &[(i64, f64)]) -> CoefVec {
        CoefVec::from_complex(Side::Unilateral, entries.iter().map(|&(i, v)| (i, Complex64::new(v, 0.0)))).unwrap()
    }

    #[test]
    fn zero_vector_examples() {
        let zero = CoefVec::zero(Side::Unilateral);
        let lam = ScalingSeq::constant(1.0);
        let b = ShiftOp::backward(Side::Unilateral);
        let h = hitting_set(&zero, &lam, &b, &Ball::new(zero.clone(), 1.0).unwrap(), 500).unwrap();
        assert_eq!(h.len(), 500);
        let e1 = uni(&[(1, 1.0)]);
        let h = hitting_set(&zero, &lam, &b, &Ball::new(e1, 0.5).unwrap(), 500).unwrap();
        assert!(h.is_empty());
    }

    #[test]
    fn agrees_with_direct_evaluation() {
        // 2B on a vector with blocks at several distances from e_1
        let op = ShiftOp::scaled_backward(Side::Unilateral, Complex64::new(2.0, 0.0));
        let x = uni(&[(3, 0.25), (7, 1.0 / 64.0), (8, 0.001), (20, 2f64.powi(-19)), (40, 1e-9)]);
        let lam = ScalingSeq::constant(1.0);
        for (center, eps) in [(uni(&[(1, 1.0)]), 0.3), (uni(&[(1, 1.0), (2, 0.01)]), 0.05), (uni(&[]), 0.5)] {
            let ball = Ball::new(center, eps).unwrap();
            let h = hitting_set(&x, &lam, &op, &ball, 60).unwrap();
            let scanner = OrbitScanner::new(&x, &lam, &op, &ball, 60).unwrap();
            for n in 1..=60 {
                let p = scaled_orbit_point(&lam, &op, n, &x).unwrap();
                let d = dist(&p, &ball.center).unwrap();
                assert_eq!(h.contains(n), d < eps, "n = {n}, d = {d}");
                let du = scanner.distance_upper(n).unwrap();
                assert!(du >= d * (1.0 - 1e-14) && du <= d * (1.0 + 1e-12) + 1e-300, "{du} vs {d}");
            }
        }
    }

    #[test]
    fn bilateral_head_and_tail() {
        let op = ShiftOp::new(Side::Bilateral, WeightSeq::InverseStepBilateral).unwrap();
        let x = CoefVec::from_complex(
            Side::Bilateral,
            [(-30, 0.5), (-3, 1.0), (0, 0.2), (4, 0.125), (9, 1.0 / 512.0), (25, 1e-6)]
                .into_iter()
                .map(|(i, v)| (i, Complex64::new(v, 0.3 * v))),
        )
        .unwrap();
        let center = CoefVec::from_complex(Side::Bilateral, [(0, Complex64::new(1.0, 0.3))]).unwrap();
        let lam = ScalingSeq::GeomInverse { a: Complex64::new(1.5, 0.0) };
        for eps in [0.1, 0.7, 2.0] {
            let ball = Ball::new(center.clone(), eps).unwrap();
            let h = hitting_set(&x, &lam, &op, &ball, 40).unwrap();
            for n in 1..=40 {
                let p = scaled_orbit_point(&lam, &op, n, &x).unwrap();
                assert_eq!(h.contains(n), dist(&p, &center).unwrap() < eps, "n = {n}");
            }
        }
    }

    #[test]
    fn nilpotent_orbit_never_returns() {
        let b = ShiftOp::backward(Side::Unilateral);
        let x = uni(&[(1, 1.0), (2, 1.0)]);
        assert!(recurrence_scan(&b, &x, 0.5, 200).unwrap().is_empty());
        let zero = CoefVec::zero(Side::Bilateral);
        let b2 = ShiftOp::backward(Side::Bilateral);
        assert_eq!(recurrence_scan(&b2, &zero, 0.1, 50).unwrap(), (1..=50).collect::<Vec<_>>());
    }
}
