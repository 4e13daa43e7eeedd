//! Weighted backward shifts `T e_n = w_n e_{n-1}` on `l2(N)` and `l2(Z)`.
//!
//! Powers are never iterated: the coefficient of `T^n x` at `j` is
//! `p^n (w_{j+1} ... w_{j+n}) x_{j+n}`, and the weight product comes from two
//! prefix sums of `ln w` held in a [`ProductTable`].

use std::f64::consts::LN_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::logscalar::LogScalar;
use crate::sequence::ScalingSeq;
use crate::text::{self, de_f64, de_f64_vec};
use crate::vector::{CoefVec, Side};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum WeightSeq {
    ConstantW {
        #[serde(deserialize_with = "de_f64")]
        c: f64,
    },
    /// `w_n = sqrt((n+1)/n)`, defined for `n >= 1` only.
    SqrtRatio,
    /// `w_n = 1` for `n <= 0`, `w_n = 2` for `n >= 1`.
    StepBilateral,
    /// `w_n = 1/2` for `n <= 0`, `w_n = 2` for `n >= 1`.
    InverseStepBilateral,
    /// `w_{first + i} = values[i]`; indices outside the table take `outside`
    /// when it is set and are a domain error otherwise.
    TableW {
        #[serde(default = "one_i64")]
        first: i64,
        #[serde(deserialize_with = "de_f64_vec")]
        values: Vec<f64>,
        #[serde(default)]
        outside: Option<f64>,
    },
}

fn one_i64() -> i64 {
    1
}

impl WeightSeq {
    pub fn table(first: i64, values: Vec<f64>, outside: Option<f64>) -> Result<Self> {
        if values.iter().chain(outside.iter()).any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(LabError::arg("weights must be positive and finite"));
        }
        Ok(WeightSeq::TableW {
            first,
            values,
            outside,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            WeightSeq::ConstantW { .. } => "constant_w",
            WeightSeq::SqrtRatio => "sqrt_ratio",
            WeightSeq::StepBilateral => "step_bilateral",
            WeightSeq::InverseStepBilateral => "inverse_step_bilateral",
            WeightSeq::TableW { .. } => "table_w",
        }
    }

    /// `ln w_n`.
    pub fn ln_weight(&self, n: i64) -> Result<f64> {
        match self {
            WeightSeq::ConstantW { c } => Ok(c.ln()),
            WeightSeq::SqrtRatio => {
                if n < 1 {
                    return Err(LabError::Domain {
                        family: self.name(),
                        index: n,
                        min: 1,
                    });
                }
                Ok(0.5 * (1.0 / n as f64).ln_1p())
            }
            WeightSeq::StepBilateral => Ok(if n <= 0 { 0.0 } else { LN_2 }),
            WeightSeq::InverseStepBilateral => Ok(if n <= 0 { -LN_2 } else { LN_2 }),
            WeightSeq::TableW {
                first,
                values,
                outside,
            } => {
                let i = n - first;
                if i >= 0 && (i as usize) < values.len() {
                    Ok(values[i as usize].ln())
                } else if let Some(w) = outside {
                    Ok(w.ln())
                } else {
                    Err(LabError::Domain {
                        family: self.name(),
                        index: n,
                        min: *first,
                    })
                }
            }
        }
    }

    pub fn weight(&self, n: i64) -> Result<f64> {
        Ok(self.ln_weight(n)?.exp())
    }

    /// Inclusive range of indices where the weights are defined.
    pub fn index_range(&self) -> (Option<i64>, Option<i64>) {
        match self {
            WeightSeq::SqrtRatio => (Some(1), None),
            WeightSeq::TableW {
                first,
                values,
                outside: None,
            } => (Some(*first), Some(first + values.len() as i64 - 1)),
            _ => (None, None),
        }
    }

    pub fn sup(&self) -> f64 {
        match self {
            WeightSeq::ConstantW { c } => *c,
            WeightSeq::SqrtRatio => std::f64::consts::SQRT_2,
            WeightSeq::StepBilateral | WeightSeq::InverseStepBilateral => 2.0,
            WeightSeq::TableW {
                values, outside, ..
            } => values.iter().chain(outside.iter()).copied().fold(0.0, f64::max),
        }
    }

    pub fn inf(&self) -> f64 {
        match self {
            WeightSeq::ConstantW { c } => *c,
            WeightSeq::SqrtRatio => 1.0,
            WeightSeq::StepBilateral => 1.0,
            WeightSeq::InverseStepBilateral => 0.5,
            WeightSeq::TableW {
                values, outside, ..
            } => values
                .iter()
                .chain(outside.iter())
                .copied()
                .fold(f64::INFINITY, f64::min),
        }
    }
}

impl std::str::FromStr for WeightSeq {
    type Err = LabError;

    /// `"constant c=2"`, `"sqrt_ratio"`, `"step_bilateral"`,
    /// `"inverse_step_bilateral"`, `"table first=1 values=[..] outside=1"`.
    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.starts_with('{') {
            return serde_json::from_str(spec).map_err(|e| LabError::parse(e.to_string()));
        }
        let (tag, p) = text::parse_kv(spec)?;
        Ok(match tag.as_str() {
            "constant" | "constant_w" => WeightSeq::ConstantW {
                c: text::parse_real(
                    p.get("c")
                        .ok_or_else(|| LabError::parse("constant weights need c="))?,
                )?,
            },
            "unweighted" => WeightSeq::ConstantW { c: 1.0 },
            "sqrt_ratio" => WeightSeq::SqrtRatio,
            "step_bilateral" => WeightSeq::StepBilateral,
            "inverse_step_bilateral" => WeightSeq::InverseStepBilateral,
            "table" | "table_w" => WeightSeq::table(
                p.get("first").map(|s| s.parse()).transpose().map_err(|e| {
                    LabError::parse(format!("first: {e}"))
                })?.unwrap_or(1),
                text::parse_real_list(
                    p.get("values")
                        .ok_or_else(|| LabError::parse("table weights need values="))?,
                )?,
                p.get("outside").map(|s| text::parse_real(s)).transpose()?,
            )?,
            other => return Err(LabError::parse(format!("unknown weight family {other:?}"))),
        })
    }
}

impl fmt::Display for WeightSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

/// Double-double accumulator entry: value = hi + lo.
#[derive(Clone, Copy, Debug, Default)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn add(self, x: f64) -> Dd {
        // two-sum, then renormalize
        let s = self.hi + x;
        let bp = s - self.hi;
        let err = (self.hi - (s - bp)) + (x - bp);
        let lo = self.lo + err;
        let hi = s + lo;
        Dd {
            hi,
            lo: lo - (hi - s),
        }
    }

    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn minus(self, other: Dd) -> f64 {
        (self.hi - other.hi) + (self.lo - other.lo)
    }
}

/// Prefix sums of `ln w` split at index 0.
///
/// With `L(t) = sum_{s=1..t} ln w_s` for `t >= 0` and
/// `L(t) = -sum_{s=t+1..0} ln w_s` for `t < 0`, every product of consecutive
/// weights is `prod_{s=a..b} w_s = exp(L(b) - L(a-1))`.
#[derive(Clone, Debug)]
pub struct ProductTable {
    weights: WeightSeq,
    /// `pos[t] = L(t)`, `t = 0..=hi`
    pos: Vec<Dd>,
    /// `neg[k] = -L(-k)`, `k = 0..=-lo`
    neg: Vec<Dd>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProductKind {
    /// `prod_{i=1..n} w_{j+i}`
    Forward { j: i64, n: u64 },
    /// `prod_{i=0..n-1} w_{j-i}`
    Backward { j: i64, n: u64 },
}

impl ProductTable {
    pub fn new(weights: &WeightSeq) -> Self {
        ProductTable {
            weights: weights.clone(),
            pos: vec![Dd::default()],
            neg: vec![Dd::default()],
        }
    }

    /// Table covering at least `L(t)` for `t` in `[lo, hi]`.
    pub fn with_range(weights: &WeightSeq, lo: i64, hi: i64) -> Result<Self> {
        let mut t = Self::new(weights);
        t.ensure(lo, hi)?;
        Ok(t)
    }

    pub fn weights(&self) -> &WeightSeq {
        &self.weights
    }

    /// Inclusive range of `t` for which `L(t)` is stored.
    pub fn built_range(&self) -> (i64, i64) {
        (-(self.neg.len() as i64 - 1), self.pos.len() as i64 - 1)
    }

    /// Extends the table so that `L(t)` is available on `[lo, hi]`, growing
    /// geometrically past the request where the weights allow it.
    pub fn ensure(&mut self, lo: i64, hi: i64) -> Result<()> {
        let (blo, bhi) = self.built_range();
        let (wlo, whi) = self.weights.index_range();
        if hi > bhi {
            let mut target = hi.max(2 * bhi).max(64);
            if let Some(m) = whi {
                target = target.min(m).max(hi);
            }
            self.pos.reserve((target - bhi) as usize);
            let mut acc = *self.pos.last().unwrap();
            for t in (bhi + 1)..=target {
                acc = acc.add(self.weights.ln_weight(t)?);
                self.pos.push(acc);
            }
        }
        if lo < blo {
            // L(t) for t < 0 involves w_{t+1} .. w_0
            let mut target = lo.min(2 * blo).min(-64);
            if let Some(m) = wlo {
                target = target.max(m - 1).min(lo);
            }
            let mut acc = *self.neg.last().unwrap();
            for t in (target..blo).rev() {
                acc = acc.add(self.weights.ln_weight(t + 1)?);
                self.neg.push(acc);
            }
        }
        Ok(())
    }

    fn prefix(&self, t: i64) -> Result<Dd> {
        let (blo, bhi) = self.built_range();
        if t < blo || t > bhi {
            return Err(LabError::Range {
                lo: t,
                hi: t,
                built_lo: blo,
                built_hi: bhi,
            });
        }
        Ok(if t >= 0 {
            self.pos[t as usize]
        } else {
            self.neg[(-t) as usize].neg()
        })
    }

    /// `ln prod_{s=a..=b} w_s`; an empty range (`b = a - 1`) gives 0.
    pub fn ln_product(&self, a: i64, b: i64) -> Result<f64> {
        let (blo, bhi) = self.built_range();
        if a - 1 < blo || b > bhi {
            return Err(LabError::Range {
                lo: a,
                hi: b,
                built_lo: blo + 1,
                built_hi: bhi,
            });
        }
        Ok(self.prefix(b)?.minus(self.prefix(a - 1)?))
    }

    /// Log of the requested product as a positive log-domain scalar.
    pub fn query(&self, kind: ProductKind) -> Result<LogScalar> {
        let l = match kind {
            ProductKind::Forward { j, n } => self.ln_product(j + 1, j + n as i64)?,
            ProductKind::Backward { j, n } => self.ln_product(j - n as i64 + 1, j)?,
        };
        Ok(LogScalar::from_log(l, 0.0))
    }

    /// [`ProductTable::query`], extending the table first if needed.
    pub fn query_extend(&mut self, kind: ProductKind) -> Result<LogScalar> {
        let (lo, hi) = match kind {
            ProductKind::Forward { j, n } => (j, j + n as i64),
            ProductKind::Backward { j, n } => (j - n as i64, j),
        };
        self.ensure(lo, hi)?;
        self.query(kind)
    }
}

pub fn product_query(pt: &ProductTable, kind: ProductKind) -> Result<LogScalar> {
    pt.query(kind)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftOp {
    pub side: Side,
    pub weights: WeightSeq,
    #[serde(default = "unit")]
    pub premultiplier: Complex64,
}

fn unit() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl ShiftOp {
    pub fn new(side: Side, weights: WeightSeq) -> Result<Self> {
        Self::with_premultiplier(side, weights, unit())
    }

    pub fn with_premultiplier(side: Side, weights: WeightSeq, premultiplier: Complex64) -> Result<Self> {
        if side == Side::HardyCoef {
            return Err(LabError::arg("shifts act on unilateral or bilateral sequences"));
        }
        if side == Side::Bilateral && weights.index_range().0.is_some() {
            return Err(LabError::arg(format!(
                "{} weights are not defined on all of Z",
                weights.name()
            )));
        }
        Ok(ShiftOp {
            side,
            weights,
            premultiplier,
        })
    }

    /// The unweighted backward shift `B`.
    pub fn backward(side: Side) -> Self {
        ShiftOp {
            side,
            weights: WeightSeq::ConstantW { c: 1.0 },
            premultiplier: unit(),
        }
    }

    /// `c * B`.
    pub fn scaled_backward(side: Side, c: Complex64) -> Self {
        ShiftOp {
            side,
            weights: WeightSeq::ConstantW { c: 1.0 },
            premultiplier: c,
        }
    }

    /// Operator-norm bound `|premultiplier| * sup w`.
    pub fn norm_bound(&self) -> f64 {
        self.premultiplier.norm() * self.weights.sup()
    }

    fn check_side(&self, x: &CoefVec) -> Result<()> {
        if x.side() != self.side {
            return Err(LabError::SideMismatch {
                left: self.side,
                right: x.side(),
            });
        }
        Ok(())
    }

    /// Table covering every product needed by `T^n x` for `n <= max_power`.
    pub fn table_for(&self, x: &CoefVec, max_power: u64) -> Result<ProductTable> {
        let mut table = ProductTable::new(&self.weights);
        if let Some((lo, hi)) = x.support_bounds() {
            // unilateral outputs live at j >= 1, so L(j) with j >= 0 suffices
            let floor = match self.side {
                Side::Unilateral => 0,
                _ => (lo - max_power as i64).min(0),
            };
            table.ensure(floor, hi.max(0))?;
        }
        Ok(table)
    }

    /// `(Tx)_j = p * w_{j+1} * x_{j+1}`.
    pub fn apply(&self, x: &CoefVec) -> Result<CoefVec> {
        self.check_side(x)?;
        let p = LogScalar::from_complex(self.premultiplier);
        let mut out = CoefVec::zero(self.side);
        for (i, v) in x.iter() {
            let j = i - 1;
            if !self.side.admits(j) {
                continue;
            }
            out.set(j, p * v.scale_log(self.weights.ln_weight(i)?))?;
        }
        Ok(out)
    }

    /// `T^n x` in one pass over the support.
    pub fn power_apply(&self, n: u64, x: &CoefVec) -> Result<CoefVec> {
        let table = self.table_for(x, n)?;
        self.power_apply_with(&table, n, x)
    }

    pub fn power_apply_with(&self, table: &ProductTable, n: u64, x: &CoefVec) -> Result<CoefVec> {
        self.scaled_power_with(table, LogScalar::ONE, n, x)
    }

    /// `c * T^n x` with every magnitude kept in log domain.
    pub fn scaled_power_with(
        &self,
        table: &ProductTable,
        c: LogScalar,
        n: u64,
        x: &CoefVec,
    ) -> Result<CoefVec> {
        self.check_side(x)?;
        if n == 0 {
            return Ok(x.scale(c));
        }
        let front = c * LogScalar::from_complex(self.premultiplier).powi(n);
        let shift = n as i64;
        let mut out = CoefVec::zero(self.side);
        if front.is_zero() {
            return Ok(out);
        }
        for (i, v) in x.iter() {
            let j = i - shift;
            if !self.side.admits(j) {
                continue;
            }
            let w = table.ln_product(j + 1, i)?;
            out.set(j, front * v.scale_log(w))?;
        }
        Ok(out)
    }
}

impl fmt::Display for ShiftOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(self).map_err(|_| fmt::Error)?)
    }
}

/// `lambda_n T^n x`.
pub fn scaled_orbit_point(lam: &ScalingSeq, op: &ShiftOp, n: u64, x: &CoefVec) -> Result<CoefVec> {
    let table = op.table_for(x, n)?;
    let c = if n == 0 { LogScalar::ONE } else { lam.eval_log(n)? };
    op.scaled_power_with(&table, c, n, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::parse_vector;

    fn uni(k: i64) -> CoefVec {
        CoefVec::basis(Side::Unilateral, k).unwrap()
    }

    #[test]
    fn unweighted_shift_on_basis() {
        let b = ShiftOp::backward(Side::Unilateral);
        assert_eq!(b.apply(&uni(5)).unwrap(), uni(4));
        assert!(b.apply(&uni(1)).unwrap().is_empty());
    }

    #[test]
    fn sqrt_ratio_first_step() {
        let t = ShiftOp::new(Side::Unilateral, WeightSeq::SqrtRatio).unwrap();
        let y = t.apply(&uni(2)).unwrap();
        assert!((y.get(1).to_complex().re - 1.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn power_zero_is_identity() {
        let t = ShiftOp::new(Side::Bilateral, WeightSeq::InverseStepBilateral).unwrap();
        let x = parse_vector(Side::Bilateral, "sum(e(-3), 2*e(4))").unwrap();
        assert_eq!(t.power_apply(0, &x).unwrap(), x);
    }

    #[test]
    fn sqrt_ratio_telescopes() {
        // prod_{i=1..n} w_{1+i} = sqrt((n+2)/2); oracle: n iterated single steps.
        let t = ShiftOp::new(Side::Unilateral, WeightSeq::SqrtRatio).unwrap();
        let n = 8;
        let x = uni(n + 1);
        let fast = t.power_apply(n as u64, &x).unwrap();
        let mut slow = x.clone();
        for _ in 0..n {
            slow = t.apply(&slow).unwrap();
        }
        let c = fast.get(1).to_complex().re;
        assert!((c - 5f64.sqrt()).abs() < 1e-14);
        assert!((slow.get(1).to_complex().re - c).abs() < 1e-14);
    }

    #[test]
    fn step_bilateral_power_matches_iteration() {
        let t = ShiftOp::new(Side::Bilateral, WeightSeq::StepBilateral).unwrap();
        for n in 1..=20u64 {
            let x = CoefVec::basis(Side::Bilateral, n as i64).unwrap();
            let fast = t.power_apply(n, &x).unwrap();
            let mut slow = x.clone();
            for _ in 0..n {
                slow = t.apply(&slow).unwrap();
            }
            // T e_n = w_n e_{n-1}, so the coefficient at 0 is w_1 * ... * w_n = 2^n
            let want = (n as f64) * LN_2;
            assert!((fast.get(0).log_mag() - want).abs() < 1e-12);
            assert!((slow.get(0).log_mag() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn product_queries() {
        let mut pt = ProductTable::with_range(&WeightSeq::SqrtRatio, 0, 2000).unwrap();
        for n in [1u64, 10, 1999] {
            let v = pt.query(ProductKind::Forward { j: 0, n }).unwrap().log_mag();
            assert!((v - 0.5 * ((n + 1) as f64).ln()).abs() < 1e-13);
        }
        let mut two = ProductTable::new(&WeightSeq::ConstantW { c: 2.0 });
        let v = two.query_extend(ProductKind::Forward { j: -17, n: 40 }).unwrap();
        assert!((v.log_mag() - 40.0 * LN_2).abs() < 1e-12);
        let mut step = ProductTable::new(&WeightSeq::StepBilateral);
        for n in [1u64, 5, 300] {
            assert_eq!(step.query_extend(ProductKind::Backward { j: 0, n }).unwrap().log_mag(), 0.0);
        }
        // SqrtRatio is undefined at 0, so backward products through 0 fail.
        assert!(pt.query_extend(ProductKind::Backward { j: 1, n: 3 }).is_err());
        let fixed = ProductTable::with_range(&WeightSeq::ConstantW { c: 2.0 }, 0, 10).unwrap();
        let (_, hi) = fixed.built_range();
        assert!(matches!(
            fixed.query(ProductKind::Forward { j: 0, n: hi as u64 + 1 }),
            Err(LabError::Range { .. })
        ));
    }

    #[test]
    fn bilateral_products_span_zero() {
        let pt = ProductTable::with_range(&WeightSeq::InverseStepBilateral, -50, 50).unwrap();
        // w_{-2} w_{-1} w_0 w_1 w_2 = (1/2)^3 * 2^2
        let v = pt.ln_product(-2, 2).unwrap();
        assert!((v + LN_2).abs() < 1e-15);
    }

    #[test]
    fn bilateral_rejects_one_sided_weights() {
        assert!(ShiftOp::new(Side::Bilateral, WeightSeq::SqrtRatio).is_err());
        assert!(ShiftOp::new(Side::HardyCoef, WeightSeq::SqrtRatio).is_err());
    }

    #[test]
    fn factorial_scaling_recovers_unit() {
        // lambda_n = n!, x_{n+1} = 1/n!  =>  (lambda_n B^n x)_1 = 1
        let b = ShiftOp::backward(Side::Unilateral);
        for n in [1u64, 5, 30, 170, 1000] {
            let inv = ScalingSeq::Factorial.eval_log(n).unwrap().recip();
            let x = CoefVec::from_log(Side::Unilateral, [(n as i64 + 1, inv)]).unwrap();
            let y = scaled_orbit_point(&ScalingSeq::Factorial, &b, n, &x).unwrap();
            assert!(y.get(1).log_mag().abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn norm_bounds() {
        let t = ShiftOp::with_premultiplier(Side::Unilateral, WeightSeq::SqrtRatio, Complex64::new(0.0, 0.5)).unwrap();
        assert!((t.norm_bound() - 0.5 * std::f64::consts::SQRT_2).abs() < 1e-15);
        assert_eq!(ShiftOp::new(Side::Bilateral, WeightSeq::InverseStepBilateral).unwrap().norm_bound(), 2.0);
    }

    #[test]
    fn weight_text_specs() {
        let w: WeightSeq = "table first=2 values=[2,1.5] outside=1".parse().unwrap();
        assert_eq!(w.weight(2).unwrap(), 2.0);
        assert_eq!(w.weight(7).unwrap(), 1.0);
        assert!("table values=[1,-1]".parse::<WeightSeq>().is_err());
        assert_eq!("constant c=2".parse::<WeightSeq>().unwrap(), WeightSeq::ConstantW { c: 2.0 });
    }
}
