//! Weight-sequence criteria for weighted shifts, each returning a certificate
//! that can be re-checked from raw weight products.
//!
//! All comparisons happen between log-products and `ln(1/eps)` or `ln G`, so
//! products like `2^{10^4}` never leave the log domain.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::sequence::ScalingSeq;
use crate::shift::{ProductKind, ProductTable, ShiftOp, WeightSeq};
use crate::vector::CoefVec;

/// Tolerance when re-deriving a certified log-product.
pub const REVERIFY_LOG_TOL: f64 = 1e-10;
pub const DEFAULT_SERIES_CAP: f64 = 12.0;
pub const DEFAULT_SCAN_HORIZON: u64 = 1_000_000;
/// Largest tail term ratio accepted as geometric decay.
pub const GEOMETRIC_RHO_MAX: f64 = 0.99;
/// Smallest Raabe exponent accepted as polynomial decay.
pub const RAABE_P_MIN: f64 = 1.05;

fn require_bilateral(w: &WeightSeq) -> Result<()> {
    if w.index_range() != (None, None) {
        return Err(LabError::arg(format!(
            "{} weights are not defined on all of Z",
            w.name()
        )));
    }
    Ok(())
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(LabError::pre(format!("eps must lie in (0, 1), got {eps}")));
    }
    Ok(())
}

/// One checked product: `j`, power `l` (1 for Salas), and its log value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductEntry {
    pub j: i64,
    pub l: u64,
    pub log_forward: f64,
    pub log_backward: f64,
}

fn entry(pt: &ProductTable, j: i64, len: u64, l: u64) -> Result<ProductEntry> {
    Ok(ProductEntry {
        j,
        l,
        log_forward: pt.query(ProductKind::Forward { j, n: len })?.log_mag(),
        log_backward: pt.query(ProductKind::Backward { j, n: len })?.log_mag(),
    })
}

/// Smallest of `log_forward - ln(1/eps)` and `ln eps - log_backward`;
/// positive exactly when both inequalities hold.
fn margin(e: &ProductEntry, ln_eps: f64) -> f64 {
    (e.log_forward + ln_eps).min(ln_eps - e.log_backward)
}

fn rederive(w: &WeightSeq, entries: &[ProductEntry], n: u64, ln_eps: f64) -> Result<bool> {
    let mut pt = ProductTable::new(w);
    for e in entries {
        let len = e.l * n;
        let f = pt.query_extend(ProductKind::Forward { j: e.j, n: len })?.log_mag();
        let b = pt.query_extend(ProductKind::Backward { j: e.j, n: len })?.log_mag();
        if (f - e.log_forward).abs() > REVERIFY_LOG_TOL || (b - e.log_backward).abs() > REVERIFY_LOG_TOL {
            return Ok(false);
        }
        let fresh = ProductEntry {
            j: e.j,
            l: e.l,
            log_forward: f,
            log_backward: b,
        };
        if margin(&fresh, ln_eps) <= 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Shared search for the Salas (`m = 1`) and multiple-recurrence conditions.
/// Returns the smallest admissible `n` and its products, or the best margin
/// seen together with the failing `(j, l)` pairs at that `n`.
fn product_search(
    w: &WeightSeq,
    m: u64,
    q: u64,
    eps: f64,
    n_max: u64,
) -> Result<std::result::Result<(u64, Vec<ProductEntry>), (Option<u64>, f64, Vec<(i64, u64)>)>> {
    let ln_eps = eps.ln();
    let qi = q as i64;
    let reach = (m * n_max) as i64 + qi + 1;
    let pt = ProductTable::with_range(w, -reach, reach)?;
    let mut best: (Option<u64>, f64, Vec<(i64, u64)>) = (None, f64::NEG_INFINITY, Vec::new());
    for n in (2 * q + 1)..=n_max {
        let mut worst = f64::INFINITY;
        let mut entries = Vec::with_capacity(((2 * q + 1) * m) as usize);
        let mut failing = Vec::new();
        for l in 1..=m {
            for j in -qi..=qi {
                let e = entry(&pt, j, l * n, l)?;
                let g = margin(&e, ln_eps);
                if g <= 0.0 {
                    failing.push((j, l));
                }
                worst = worst.min(g);
                entries.push(e);
            }
        }
        if worst > 0.0 {
            return Ok(Ok((n, entries)));
        }
        if worst > best.1 {
            best = (Some(n), worst, failing);
        }
    }
    Ok(Err(best))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SalasCertificate {
    pub weights: WeightSeq,
    pub n: u64,
    pub eps: f64,
    pub q: u64,
    pub products: Vec<ProductEntry>,
}

impl SalasCertificate {
    /// Rebuilds every product from a fresh table and rechecks both bounds.
    pub fn reverify(&self) -> Result<bool> {
        Ok(self.n > 2 * self.q
            && self.products.len() == (2 * self.q + 1) as usize
            && rederive(&self.weights, &self.products, self.n, self.eps.ln())?)
    }
}

/// Search failure: the `n` with the largest (still non-positive) log margin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NotFound {
    pub n_max: u64,
    pub best_n: Option<u64>,
    pub best_log_margin: f64,
    /// `(j, l)` pairs violating an inequality at `best_n`.
    pub failing: Vec<(i64, u64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SalasOutcome {
    Certified(SalasCertificate),
    NotFound(NotFound),
}

impl SalasOutcome {
    pub fn certificate(&self) -> Option<&SalasCertificate> {
        match self {
            SalasOutcome::Certified(c) => Some(c),
            SalasOutcome::NotFound(_) => None,
        }
    }
}

/// Smallest `n` in `(2q, n_max]` with `prod_{s=1..n} w_{s+j} > 1/eps` and
/// `prod_{s=0..n-1} w_{j-s} < eps` for every `|j| <= q`.
pub fn salas_check(w: &WeightSeq, eps: f64, q: u64, n_max: u64) -> Result<SalasOutcome> {
    require_bilateral(w)?;
    check_eps(eps)?;
    Ok(match product_search(w, 1, q, eps, n_max)? {
        Ok((n, products)) => SalasOutcome::Certified(SalasCertificate {
            weights: w.clone(),
            n,
            eps,
            q,
            products,
        }),
        Err((best_n, best_log_margin, failing)) => SalasOutcome::NotFound(NotFound {
            n_max,
            best_n,
            best_log_margin,
            failing,
        }),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MRShiftCertificate {
    pub weights: WeightSeq,
    pub n: u64,
    pub m: u64,
    pub q: u64,
    pub eps: f64,
    /// `m (2q + 1)` entries, each carrying a forward and a backward product.
    pub products: Vec<ProductEntry>,
}

impl MRShiftCertificate {
    pub fn reverify(&self) -> Result<bool> {
        Ok(self.n > 2 * self.q
            && self.products.len() == (self.m * (2 * self.q + 1)) as usize
            && rederive(&self.weights, &self.products, self.n, self.eps.ln())?)
    }

    /// Whether the same products also certify a larger `eps`.
    pub fn holds_at(&self, eps: f64) -> bool {
        eps >= self.eps && self.products.iter().all(|e| margin(e, eps.ln()) > 0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum MRShiftOutcome {
    Certified(MRShiftCertificate),
    NotFound(NotFound),
}

impl MRShiftOutcome {
    pub fn certificate(&self) -> Option<&MRShiftCertificate> {
        match self {
            MRShiftOutcome::Certified(c) => Some(c),
            MRShiftOutcome::NotFound(_) => None,
        }
    }
}

/// Smallest `n` in `(2q, n_max]` with, for every `|j| <= q` and `l = 1..m`,
/// `prod_{i=1..ln} w_{j+i} > 1/eps` and `prod_{i=0..ln-1} w_{j-i} < eps`.
pub fn mr_shift_check(w: &WeightSeq, m: u64, q: u64, eps: f64, n_max: u64) -> Result<MRShiftOutcome> {
    require_bilateral(w)?;
    check_eps(eps)?;
    if m < 1 {
        return Err(LabError::pre("order m must be at least 1"));
    }
    Ok(match product_search(w, m, q, eps, n_max)? {
        Ok((n, products)) => MRShiftOutcome::Certified(MRShiftCertificate {
            weights: w.clone(),
            n,
            m,
            q,
            eps,
            products,
        }),
        Err((best_n, best_log_margin, failing)) => MRShiftOutcome::NotFound(NotFound {
            n_max,
            best_n,
            best_log_margin,
            failing,
        }),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvertibleSequence {
    pub m: u64,
    pub threshold: f64,
    pub n_max: u64,
    /// Every `n <= n_max` passing both product thresholds for all `l <= m`.
    pub n_values: Vec<u64>,
}

/// For an invertible bilateral shift, all `n <= n_max` with
/// `prod_{i=1..ln} w_i > G` and `prod_{i=0..ln} 1/w_{-i} > G` for `l = 1..m`.
pub fn mr_invertible_check(w: &WeightSeq, m: u64, n_max: u64, threshold: f64) -> Result<InvertibleSequence> {
    require_bilateral(w)?;
    if m < 1 {
        return Err(LabError::pre("order m must be at least 1"));
    }
    if !(w.inf() > 0.0) {
        return Err(LabError::pre(format!(
            "{} weights are not bounded below; the shift is not invertible",
            w.name()
        )));
    }
    let ln_g = threshold.ln();
    let reach = (m * n_max) as i64 + 1;
    let pt = ProductTable::with_range(w, -reach, reach)?;
    let mut n_values = Vec::new();
    for n in 1..=n_max {
        let mut ok = true;
        for l in 1..=m {
            let len = (l * n) as i64;
            let right = pt.ln_product(1, len)?;
            let left = -pt.ln_product(-len, 0)?;
            if !(right > ln_g && left > ln_g) {
                ok = false;
                break;
            }
        }
        if ok {
            n_values.push(n);
        }
    }
    Ok(InvertibleSequence {
        m,
        threshold,
        n_max,
        n_values,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "route", rename_all = "snake_case")]
pub enum TailRoute {
    /// `t_{n+1} / t_n <= rho` over the last decade; tail `<= t_N rho / (1 - rho)`.
    Geometric { rho: f64 },
    /// `n (t_n / t_{n+1} - 1) >= p > 1` over the last decade; tail `<= N t_N / (p - 1)`.
    Raabe { p: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SeriesOutcome {
    ConvergesCertified {
        sum: f64,
        tail_bound: f64,
        tail: TailRoute,
    },
    DivergesObserved {
        partial_sum: f64,
        cap: f64,
        at_n: u64,
    },
    Inconclusive {
        partial_sum: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesVerdict {
    pub weights: WeightSeq,
    pub outcome: SeriesOutcome,
    /// Last index summed.
    pub n_used: u64,
    /// `(N, S_N)` on a geometric grid.
    pub partial_sums: Vec<(u64, f64)>,
}

/// Scans `S_N = sum_{n<=N} (w_1 ... w_n)^{-2}`.
pub fn fhc_series_check(w: &WeightSeq, n_max: u64, cap: f64) -> Result<SeriesVerdict> {
    let (lo, hi) = w.index_range();
    if lo.is_some_and(|l| l > 1) {
        return Err(LabError::arg("unilateral weights must start at index 1"));
    }
    let n_used = match hi {
        Some(h) => n_max.min(h.max(0) as u64),
        None => n_max,
    };
    if n_used < 10 {
        return Err(LabError::pre("series scan needs at least 10 terms"));
    }
    let mut partial_sums = Vec::new();
    let mut next_grid = 10u64;
    let mut log_prod = 0.0;
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    let decade = n_used / 10;
    let mut rho_max = f64::NEG_INFINITY;
    let mut raabe_min = f64::INFINITY;
    let mut prev_log_term = f64::NAN;
    let mut last_log_term = 0.0;
    for n in 1..=n_used {
        log_prod += w.ln_weight(n as i64)?;
        let lt = -2.0 * log_prod;
        let t = lt.exp();
        let s = sum + t;
        comp += if sum.abs() >= t.abs() { (sum - s) + t } else { (t - s) + sum };
        sum = s;
        if n > decade && n > 1 {
            // ratio t_n / t_{n-1} and Raabe quantity at n - 1
            let lr = lt - prev_log_term;
            rho_max = rho_max.max(lr.exp());
            let m = (n - 1) as f64;
            raabe_min = raabe_min.min(m * (-lr).exp_m1());
        }
        prev_log_term = lt;
        last_log_term = lt;
        if n == next_grid || n == n_used {
            partial_sums.push((n, sum + comp));
            next_grid = next_grid.saturating_mul(2);
        }
        if sum + comp > cap {
            partial_sums.push((n, sum + comp));
            partial_sums.dedup();
            return Ok(SeriesVerdict {
                weights: w.clone(),
                outcome: SeriesOutcome::DivergesObserved {
                    partial_sum: sum + comp,
                    cap,
                    at_n: n,
                },
                n_used: n,
                partial_sums,
            });
        }
    }
    let total = sum + comp;
    let t_last = last_log_term.exp();
    let outcome = if rho_max <= GEOMETRIC_RHO_MAX {
        SeriesOutcome::ConvergesCertified {
            sum: total,
            tail_bound: t_last * rho_max / (1.0 - rho_max),
            tail: TailRoute::Geometric { rho: rho_max },
        }
    } else if raabe_min >= RAABE_P_MIN {
        SeriesOutcome::ConvergesCertified {
            sum: total,
            tail_bound: n_used as f64 * t_last / (raabe_min - 1.0),
            tail: TailRoute::Raabe { p: raabe_min },
        }
    } else {
        SeriesOutcome::Inconclusive { partial_sum: total }
    };
    Ok(SeriesVerdict {
        weights: w.clone(),
        outcome,
        n_used,
        partial_sums,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub rate: f64,
    pub n_max: u64,
    /// `max_n ||T^n x|| / (rate^n ||x||)`; at most `1 + 1e-9` when the bound holds.
    pub worst_ratio: f64,
    /// `min_n ||T^n x|| / (rate^n ||x||)`; zero once the orbit dies.
    pub least_ratio: f64,
    pub holds: bool,
    /// `||x|| (1 - rate)`, a lower bound for `||T^n x - x||` at every `n >= 1`.
    pub separation: f64,
}

/// Checks `||T^n x|| <= rho^n ||x||` for the recorded norm bound `rho < 1`.
pub fn norm_decay_check(op: &ShiftOp, x: &CoefVec, n_max: u64) -> Result<DecayReport> {
    let rho = op.norm_bound();
    if !(rho < 1.0) {
        return Err(LabError::pre(format!("norm bound {rho} is not below 1")));
    }
    let log_x = x.log_norm();
    let slack = (1e-9f64).ln_1p();
    let mut worst = f64::NEG_INFINITY;
    let mut least = f64::INFINITY;
    let mut y = x.clone();
    for n in 1..=n_max {
        y = op.apply(&y)?;
        if y.is_empty() {
            least = f64::NEG_INFINITY;
            break;
        }
        let r = y.log_norm() - n as f64 * rho.ln() - log_x;
        worst = worst.max(r);
        least = least.min(r);
    }
    let worst_ratio = worst.exp();
    Ok(DecayReport {
        rate: rho,
        n_max,
        worst_ratio,
        least_ratio: least.exp(),
        holds: worst <= slack,
        separation: log_x.exp() * (1.0 - rho),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuperRatioReport {
    pub n_o: u64,
    pub norm_bound: f64,
    pub n_max: u64,
    /// Smallest `ln(bound_n) - ln ||lambda_n T^n x||` over `[n_o, n_max]`.
    pub min_log_slack: f64,
    pub holds: bool,
    pub last_log_norm: f64,
}

/// Locates `n_o` with `|lambda_n| / |lambda_{n+1}| > 1 + ||T||` on
/// `[n_o, n_max]` and checks
/// `||lambda_n T^n x|| <= |lambda_{n_o}| (1+||T||)^{n_o} (||T||/(1+||T||))^n ||x||`.
pub fn superratio_decay_check(
    lam: &ScalingSeq,
    op: &ShiftOp,
    x: &CoefVec,
    n_max: u64,
) -> Result<SuperRatioReport> {
    let t = op.norm_bound();
    let ln1t = t.ln_1p();
    let start = lam.min_index();
    let mut n_o = None;
    let mut next = lam.eval_log(n_max + 1)?;
    for n in (start..=n_max).rev() {
        let cur = lam.eval_log(n)?;
        if cur.log_mag() - next.log_mag() > ln1t {
            n_o = Some(n);
        } else {
            break;
        }
        next = cur;
    }
    let n_o = match n_o {
        Some(n) if n <= n_max / 2 => n,
        _ => {
            return Err(LabError::pre(format!(
                "no n_o <= {} with |lambda_n|/|lambda_(n+1)| > 1 + ||T|| up to {n_max}",
                n_max / 2
            )))
        }
    };
    let log_x = x.log_norm();
    let base = lam.eval_log(n_o)?.log_mag() + n_o as f64 * ln1t + log_x;
    let ln_ratio = t.ln() - ln1t;
    let table = op.table_for(x, n_max)?;
    let mut min_slack = f64::INFINITY;
    let mut last = f64::NEG_INFINITY;
    for n in n_o..=n_max {
        let p = op.scaled_power_with(&table, lam.eval_log(n)?, n, x)?;
        last = p.log_norm();
        if last == f64::NEG_INFINITY {
            continue;
        }
        let bound = base + n as f64 * ln_ratio;
        min_slack = min_slack.min(bound - last);
    }
    Ok(SuperRatioReport {
        n_o,
        norm_bound: t,
        n_max,
        min_log_slack: min_slack,
        holds: min_slack >= -1e-9,
        last_log_norm: last,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::Side;
    use num_complex::Complex64;

    #[test]
    fn salas_examples() {
        let r = salas_check(&WeightSeq::StepBilateral, 0.5, 0, 10_000).unwrap();
        assert!(r.certificate().is_none());

        let r = salas_check(&WeightSeq::InverseStepBilateral, 0.5, 1, 10_000).unwrap();
        let c = r.certificate().expect("certificate");
        assert!(c.reverify().unwrap());
        // direct multiplication oracle
        for e in &c.products {
            let f: f64 = (1..=c.n as i64).map(|s| WeightSeq::InverseStepBilateral.weight(s + e.j).unwrap()).product();
            let b: f64 = (0..c.n as i64).map(|s| WeightSeq::InverseStepBilateral.weight(e.j - s).unwrap()).product();
            assert!(f > 2.0 && b < 0.5, "j = {}", e.j);
            assert!((f.ln() - e.log_forward).abs() < 1e-12);
        }
        // j = 1 needs w_1 w_0 ... w_{2-n} = 2^{2-n} < 1/2
        assert_eq!(c.n, 4);

        let r = salas_check(&WeightSeq::ConstantW { c: 1.0 }, 0.9, 2, 1000).unwrap();
        assert!(r.certificate().is_none());
        assert!(salas_check(&WeightSeq::SqrtRatio, 0.5, 0, 10).is_err());
    }

    #[test]
    fn mr_shift_examples() {
        let r = mr_shift_check(&WeightSeq::InverseStepBilateral, 3, 2, 0.1, 1000).unwrap();
        let c = r.certificate().expect("certificate");
        assert_eq!(c.products.len(), 15);
        assert!(c.reverify().unwrap());
        assert!(c.holds_at(0.5));

        assert!(mr_shift_check(&WeightSeq::StepBilateral, 1, 0, 0.5, 2000)
            .unwrap()
            .certificate()
            .is_none());
        let r = mr_shift_check(&WeightSeq::ConstantW { c: 2.0 }, 2, 1, 0.5, 500).unwrap();
        match r {
            MRShiftOutcome::NotFound(nf) => assert!(nf.failing.iter().all(|&(_, l)| l >= 1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn salas_implies_mr_with_m_one() {
        for (eps, q) in [(0.5, 0), (0.1, 1), (0.01, 3)] {
            let s = salas_check(&WeightSeq::InverseStepBilateral, eps, q, 500).unwrap();
            let m = mr_shift_check(&WeightSeq::InverseStepBilateral, 1, q, eps, 500).unwrap();
            assert_eq!(s.certificate().map(|c| c.n), m.certificate().map(|c| c.n));
        }
    }

    #[test]
    fn invertible_sequences() {
        let r = mr_invertible_check(&WeightSeq::InverseStepBilateral, 2, 200, 1e3).unwrap();
        // 2^n > 10^3 from n = 10 on; the left product 2^(n+1) passes from n = 9
        assert_eq!(r.n_values, (10..=200).collect::<Vec<_>>());
        assert!(mr_invertible_check(&WeightSeq::StepBilateral, 2, 200, 1e3).unwrap().n_values.is_empty());
        assert!(mr_invertible_check(&WeightSeq::ConstantW { c: 1.0 }, 1, 200, 1e3).unwrap().n_values.is_empty());
        assert!(mr_invertible_check(&WeightSeq::SqrtRatio, 1, 10, 2.0).is_err());
    }

    #[test]
    fn series_examples() {
        let v = fhc_series_check(&WeightSeq::ConstantW { c: 2.0 }, 50, DEFAULT_SERIES_CAP).unwrap();
        match v.outcome {
            SeriesOutcome::ConvergesCertified { sum, tail_bound, .. } => {
                assert!((sum - 1.0 / 3.0).abs() < 1e-9);
                assert!(tail_bound <= 1e-12);
            }
            other => panic!("{other:?}"),
        }

        let v = fhc_series_check(&WeightSeq::SqrtRatio, 1_000_000, DEFAULT_SERIES_CAP).unwrap();
        match v.outcome {
            SeriesOutcome::DivergesObserved { at_n, partial_sum, .. } => {
                assert!(at_n <= 1_000_000);
                assert!(partial_sum > 12.0);
            }
            other => panic!("{other:?}"),
        }

        // products w_1 ... w_n = n
        let n = 10_000;
        let values: Vec<f64> = (1..=n).map(|k| if k == 1 { 1.0 } else { k as f64 / (k - 1) as f64 }).collect();
        let w = WeightSeq::table(1, values, None).unwrap();
        let v = fhc_series_check(&w, n as u64, DEFAULT_SERIES_CAP).unwrap();
        match v.outcome {
            SeriesOutcome::ConvergesCertified { sum, tail_bound, tail: TailRoute::Raabe { p } } => {
                let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
                assert!(p > 1.9);
                // the Raabe rate is read off the last decade, so the tail is an estimate
                assert!(sum < pi2_6);
                assert!(((pi2_6 - sum) / tail_bound - 1.0).abs() < 1e-3);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn norm_decay() {
        let w = 1.5;
        let op = ShiftOp::scaled_backward(Side::Unilateral, Complex64::new(1.0 / w, 0.0));
        let r = norm_decay_check(&op, &CoefVec::basis(Side::Unilateral, 5).unwrap(), 50).unwrap();
        assert!(r.holds);
        assert!((r.worst_ratio - 1.0).abs() < 1e-12);
        assert_eq!(r.least_ratio, 0.0);
        assert!((r.rate - 1.0 / w).abs() < 1e-15);
        let op = ShiftOp::scaled_backward(Side::Bilateral, Complex64::new(0.9, 0.0));
        let r = norm_decay_check(&op, &CoefVec::basis(Side::Bilateral, 5).unwrap(), 200).unwrap();
        assert!((r.least_ratio - 1.0).abs() < 1e-12 && (r.worst_ratio - 1.0).abs() < 1e-12);
        let op = ShiftOp::scaled_backward(Side::Unilateral, Complex64::new(2.0, 0.0));
        assert!(norm_decay_check(&op, &CoefVec::basis(Side::Unilateral, 5).unwrap(), 5).is_err());
    }

    #[test]
    fn superratio() {
        let op = ShiftOp::scaled_backward(Side::Unilateral, Complex64::new(2.0, 0.0));
        let x = CoefVec::from_complex(Side::Unilateral, (1..=10).map(|i| (i, Complex64::new(1.0, 0.0)))).unwrap();
        let lam = ScalingSeq::reciprocal(ScalingSeq::Factorial);
        let r = superratio_decay_check(&lam, &op, &x, 200).unwrap();
        assert!(r.holds, "{r:?}");
        assert!(r.n_o <= 3);
        assert!(superratio_decay_check(&ScalingSeq::Factorial, &op, &x, 200).is_err());
        assert!(superratio_decay_check(&ScalingSeq::constant(1.0), &op, &x, 200).is_err());
    }
}
