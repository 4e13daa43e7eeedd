//! Explicit frequently-universal vectors for backward weighted shifts.
//!
//! Target `y_i` gets the residue class `A_i = {n >= g : n = i g mod r g}`.
//! For each planned `n` a scaled copy of `y_i` is placed at `n + supp(y_i)`
//! so that `lambda_n T^n x` reproduces `y_i` on its support exactly. The
//! later blocks leave a residual that has to be measured, so every build ends
//! with a verification pass over all planned `n`.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::logscalar::LogScalar;
use crate::orbits::{density_stats, hitting_set, DensityStats, HittingSet, OrbitScanner};
use crate::sequence::ScalingSeq;
use crate::shift::{ProductTable, ShiftOp};
use crate::vector::{Ball, CoefVec, Side};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub y: CoefVec,
    pub eps: f64,
    /// Largest support index of `y`.
    pub q: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockPlan {
    pub targets: Vec<Target>,
    pub gap: u64,
    pub n_min: u64,
}

impl BlockPlan {
    /// Checks supports and the gap. `gap = None` picks `2 max q + 8`.
    pub fn new(targets: Vec<(CoefVec, f64)>, gap: Option<u64>) -> Result<Self> {
        let mut out = Vec::with_capacity(targets.len());
        for (y, eps) in targets {
            if y.side() != Side::Unilateral {
                return Err(LabError::arg("targets must be unilateral vectors"));
            }
            let Some((lo, hi)) = y.support_bounds() else {
                return Err(LabError::arg("targets must be non-zero"));
            };
            if lo < 1 {
                return Err(LabError::arg(format!("target support starts at {lo}, below 1")));
            }
            if !(eps > 0.0 && eps.is_finite()) {
                return Err(LabError::arg(format!("target radius must be positive, got {eps}")));
            }
            out.push(Target { y, eps, q: hi as u64 });
        }
        let q_max = out.iter().map(|t| t.q).max().unwrap_or(0);
        let gap = gap.unwrap_or(2 * q_max + 8);
        if gap <= q_max {
            return Err(LabError::pre(format!("gap {gap} must exceed the widest support {q_max}")));
        }
        Ok(BlockPlan {
            targets: out,
            gap,
            n_min: gap,
        })
    }

    pub fn period(&self) -> u64 {
        self.targets.len() as u64 * self.gap
    }

    /// Members of `A_i` in `[1, n_max]` (targets numbered from 0).
    pub fn class(&self, i: usize, n_max: u64) -> Vec<u64> {
        let p = self.period();
        if p == 0 || i >= self.targets.len() {
            return Vec::new();
        }
        let start = (i as u64 + 1) * self.gap;
        (0..)
            .map(|k| start + k * p)
            .take_while(|&n| n <= n_max)
            .filter(|&n| n >= self.n_min)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetReport {
    pub planned: u64,
    pub hits: u64,
    /// Largest `||lambda_n T^n x - y_i||` over planned `n`.
    pub worst_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FUVector {
    x: CoefVec,
    plan: BlockPlan,
    lam: ScalingSeq,
    op: ShiftOp,
    horizon: u64,
    report: Vec<TargetReport>,
}

impl FUVector {
    pub fn x(&self) -> &CoefVec {
        &self.x
    }

    pub fn plan(&self) -> &BlockPlan {
        &self.plan
    }

    pub fn sequence(&self) -> &ScalingSeq {
        &self.lam
    }

    pub fn operator(&self) -> &ShiftOp {
        &self.op
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn report(&self) -> &[TargetReport] {
        &self.report
    }
}

/// Largest log-magnitude of each placed block, in order of `n`.
fn check_decay(blocks: &[(u64, usize, f64)], plan: &BlockPlan) -> Result<()> {
    for i in 0..plan.targets.len() {
        let mags: Vec<f64> = blocks.iter().filter(|b| b.1 == i).map(|b| b.2).collect();
        if let (Some(first), Some(last)) = (mags.first(), mags.last()) {
            if mags.len() > 1 && last >= first {
                return Err(LabError::InfeasibleDecay(format!(
                    "placed coefficients for target {i} do not decay (log-magnitude {first:.3} at the first block, {last:.3} at the last)"
                )));
            }
        }
    }
    Ok(())
}

/// Places every block up to `n_max` and verifies each planned `n`.
pub fn build(lam: &ScalingSeq, op: &ShiftOp, plan: BlockPlan, n_max: u64) -> Result<FUVector> {
    if op.side != Side::Unilateral {
        return Err(LabError::pre("the builder works with unilateral backward shifts"));
    }
    let p = LogScalar::from_complex(op.premultiplier);
    let q_max = plan.targets.iter().map(|t| t.q).max().unwrap_or(0) as i64;
    let mut table = ProductTable::new(&op.weights);
    table.ensure(0, n_max as i64 + q_max)?;
    let mut x = CoefVec::zero(Side::Unilateral);
    let mut blocks = Vec::new();
    let mut schedule: Vec<(u64, usize)> = (0..plan.targets.len())
        .flat_map(|i| plan.class(i, n_max).into_iter().map(move |n| (n, i)))
        .collect();
    schedule.sort_unstable();
    for &(n, i) in &schedule {
        if n < lam.min_index() {
            continue;
        }
        let front = lam.eval_log(n)? * p.powi(n);
        if front.is_zero() {
            return Err(LabError::InfeasibleDecay(format!("lambda_n p^n vanishes at n = {n}")));
        }
        let inv = front.recip();
        let mut top = f64::NEG_INFINITY;
        for (j, v) in plan.targets[i].y.iter() {
            let w = table.ln_product(j + 1, j + n as i64)?;
            let c = (inv * v).scale_log(-w);
            top = top.max(c.log_mag());
            x.set(j + n as i64, c)?;
        }
        blocks.push((n, i, top));
    }
    check_decay(&blocks, &plan)?;

    let mut report = Vec::with_capacity(plan.targets.len());
    for (i, t) in plan.targets.iter().enumerate() {
        let ball = Ball::new(t.y.clone(), t.eps)?;
        let scanner = OrbitScanner::new(&x, lam, op, &ball, n_max)?;
        let mut r = TargetReport {
            planned: 0,
            hits: 0,
            worst_distance: 0.0,
        };
        for n in plan.class(i, n_max) {
            if n < lam.min_index() {
                continue;
            }
            r.planned += 1;
            let d = scanner.distance_upper(n)?;
            r.worst_distance = r.worst_distance.max(d);
            if d < t.eps || scanner.contains(n)? {
                r.hits += 1;
            } else {
                return Err(LabError::VerificationFailed(format!(
                    "target {i} missed at n = {n} (distance {d:.3e} >= {}); try a larger gap than {}",
                    t.eps, plan.gap
                )));
            }
        }
        report.push(r);
    }
    Ok(FUVector {
        x,
        plan,
        lam: lam.clone(),
        op: op.clone(),
        horizon: n_max,
        report,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct TargetCheck {
    pub hits: HittingSet,
    pub density: DensityStats,
}

/// Density window start: `max(ceil(sqrt N), 50 P)`, at most `N / 10`.
pub fn fu_window_start(n_max: u64, period: u64) -> u64 {
    let root = (n_max as f64).sqrt().ceil() as u64;
    root.max(50 * period).max(10).min(n_max / 10)
}

/// Recomputes each hitting set from scratch and checks that it contains the
/// planned class. `radii` overrides the target radii.
pub fn verify_fu(v: &FUVector, radii: Option<&[f64]>) -> Result<Vec<TargetCheck>> {
    let n_max = v.horizon;
    let mut out = Vec::with_capacity(v.plan.targets.len());
    for (i, t) in v.plan.targets.iter().enumerate() {
        let eps = radii.and_then(|r| r.get(i).copied()).unwrap_or(t.eps);
        let ball = Ball::new(t.y.clone(), eps)?;
        let hits = hitting_set(&v.x, &v.lam, &v.op, &ball, n_max)?;
        let missing: Vec<u64> = v
            .plan
            .class(i, n_max)
            .into_iter()
            .filter(|&n| n >= v.lam.min_index() && !hits.contains(n))
            .collect();
        if let Some(n) = missing.first() {
            return Err(LabError::VerificationFailed(format!(
                "target {i}: hitting set misses planned n = {n} ({} misses)",
                missing.len()
            )));
        }
        let density = density_stats(&hits, fu_window_start(n_max, v.plan.period()))?;
        out.push(TargetCheck { hits, density });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::{scaled_orbit_point, WeightSeq};
    use num_complex::Complex64;

    fn e(k: i64) -> CoefVec {
        CoefVec::basis(Side::Unilateral, k).unwrap()
    }

    fn two_b() -> ShiftOp {
        ShiftOp::scaled_backward(Side::Unilateral, Complex64::new(2.0, 0.0))
    }

    #[test]
    fn plan_classes() {
        let plan = BlockPlan::new(vec![(e(1), 0.1), (e(2), 0.1), (e(1), 0.1)], Some(5)).unwrap();
        assert_eq!(plan.period(), 15);
        assert_eq!(plan.class(0, 40), vec![5, 20, 35]);
        assert_eq!(plan.class(2, 40), vec![15, 30]);
        assert_eq!(BlockPlan::new(vec![(e(3), 0.1)], None).unwrap().gap, 14);
        assert!(BlockPlan::new(vec![(e(3), 0.1)], Some(3)).is_err());
        assert!(BlockPlan::new(vec![(CoefVec::zero(Side::Unilateral), 0.1)], None).is_err());
    }

    #[test]
    fn doubling_placement() {
        let plan = BlockPlan::new(vec![(e(1), 1e-3)], Some(16)).unwrap();
        let v = build(&ScalingSeq::constant(1.0), &two_b(), plan, 100_000).unwrap();
        for (i, c) in v.x().iter() {
            let n = i - 1;
            assert_eq!(n % 16, 0);
            assert!((c.log_mag() + n as f64 * std::f64::consts::LN_2).abs() < 1e-9);
        }
        let r = &v.report()[0];
        assert_eq!(r.hits, r.planned);
        assert_eq!(r.planned, 100_000 / 16);
        // the next block contributes 2^{-g} at index 1 + g
        assert!(r.worst_distance <= 2f64.powi(-15));
        assert!(r.worst_distance >= 2f64.powi(-17));
    }

    #[test]
    fn factorial_placement() {
        let plan = BlockPlan::new(vec![(e(1), 1e-3)], None).unwrap();
        let op = ShiftOp::backward(Side::Unilateral);
        let v = build(&ScalingSeq::Factorial, &op, plan, 2000).unwrap();
        let c = v.x().get(v.plan().gap as i64 + 1);
        let want: f64 = (1..=v.plan().gap).map(|k| (k as f64).ln()).sum();
        assert!((c.log_mag() + want).abs() < 1e-9);
        assert!(v.report()[0].worst_distance < 1e-9);
    }

    #[test]
    fn unit_weights_do_not_decay() {
        let plan = BlockPlan::new(vec![(e(1), 1e-3)], None).unwrap();
        let op = ShiftOp::backward(Side::Unilateral);
        let r = build(&ScalingSeq::constant(1.0), &op, plan, 1000);
        assert!(matches!(r, Err(LabError::InfeasibleDecay(_))));
    }

    #[test]
    fn tight_gap_fails_verification() {
        // 1.1 B with gap 2 leaves a residual of 1.1^{-2} at the next block
        let plan = BlockPlan::new(vec![(e(1), 0.5)], Some(2)).unwrap();
        let op = ShiftOp::scaled_backward(Side::Unilateral, Complex64::new(1.1, 0.0));
        let r = build(&ScalingSeq::constant(1.0), &op, plan, 200);
        assert!(matches!(r, Err(LabError::VerificationFailed(_))));
    }

    #[test]
    fn on_support_exact() {
        let y = CoefVec::from_complex(Side::Unilateral, [(1, Complex64::new(0.5, -1.0)), (3, Complex64::new(2.0, 0.0))]).unwrap();
        let plan = BlockPlan::new(vec![(y.clone(), 1e-2)], None).unwrap();
        let op = ShiftOp::new(Side::Unilateral, WeightSeq::SqrtRatio).unwrap();
        let lam = ScalingSeq::ExpPow { a: 1.0 };
        let v = build(&lam, &op, plan, 400).unwrap();
        for n in v.plan().class(0, 400) {
            let p = scaled_orbit_point(&lam, &op, n, v.x()).unwrap();
            for (j, want) in y.iter() {
                let got = p.get(j);
                assert!((got.log_mag() - want.log_mag()).abs() < 1e-10, "n = {n}");
                assert!((got.to_complex() - want.to_complex()).norm() < 1e-10 * want.abs());
            }
        }
    }

    #[test]
    fn verification_recovers_classes() {
        let plan = BlockPlan::new(vec![(e(1), 1e-3), (e(2), 1e-3)], Some(12)).unwrap();
        let v = build(&ScalingSeq::constant(1.0), &two_b(), plan, 20_000).unwrap();
        let checks = verify_fu(&v, None).unwrap();
        for (i, c) in checks.iter().enumerate() {
            for n in v.plan().class(i, 20_000) {
                assert!(c.hits.contains(n));
            }
            assert!((c.density.lower_est - 1.0 / 24.0).abs() < 0.002, "{:?}", c.density);
        }
        let empty = build(&ScalingSeq::constant(1.0), &two_b(), BlockPlan::new(vec![], None).unwrap(), 1000).unwrap();
        assert!(verify_fu(&empty, None).unwrap().is_empty());
    }
}
