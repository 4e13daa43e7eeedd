//! Multiple-recurrence witnesses built from progressions in hitting sets.
//!
//! If `lambda_n T^n x` lands in `B(y, eps/2)` for every `n` in a progression
//! `a, a + l, ..., a + m l`, and the ratios `lambda_a / lambda_{a + j l}` are
//! close enough to 1, then `u = lambda_a T^a x` satisfies
//! `T^{j l} u in B(y, eps)` for `j = 0..m`.

use serde::{Deserialize, Serialize};

use super::patterns::ap_k_members;
use super::scan::hitting_set;
use crate::error::{LabError, Result};
use crate::logscalar::LogScalar;
use crate::sequence::{ratio_classify, ScalingSeq, Verdict, DEFAULT_RATIO_TOL};
use crate::shift::{scaled_orbit_point, ShiftOp};
use crate::vector::{dist, norm, Ball, CoefVec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MRWitness {
    pub u: CoefVec,
    pub ell: u64,
    pub m: u64,
    /// Orbit index `u` was taken from, and the progression factor.
    pub a: u64,
    pub k: u64,
    pub center: CoefVec,
    pub eps: f64,
    /// `dist(T^{j ell} u, y)` for `j = 0..=m`.
    pub distances: Vec<f64>,
}

impl MRWitness {
    /// Recomputes every `T^{j ell} u` and checks it against the ball.
    pub fn reverify(&self, op: &ShiftOp) -> Result<bool> {
        for j in 0..=self.m {
            let p = op.power_apply(j * self.ell, &self.u)?;
            if !(dist(&p, &self.center)? < self.eps) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MrDiagnostics {
    pub hits: usize,
    /// `(k, number of starts)` for the k with the most progression starts.
    pub largest_ap: Option<(u64, usize)>,
    /// Smallest `max_j |lambda_a/lambda_{a+j l} - 1| * ||u_j||` over tried starts.
    pub best_ratio_defect: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum MrSearch {
    Found {
        witness: MRWitness,
        precondition: Verdict,
    },
    NotFound {
        diagnostics: MrDiagnostics,
        precondition: Verdict,
    },
}

impl MrSearch {
    pub fn witness(&self) -> Option<&MRWitness> {
        match self {
            MrSearch::Found { witness, .. } => Some(witness),
            MrSearch::NotFound { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MrParams {
    pub m: u64,
    pub tau: u64,
    pub n_max: u64,
    pub k_max: u64,
}

#[allow(clippy::too_many_arguments)]
fn check_candidate(
    x: &CoefVec,
    lam: &ScalingSeq,
    op: &ShiftOp,
    ball: &Ball,
    m: u64,
    a: u64,
    k: u64,
    ell: u64,
) -> Result<Option<MRWitness>> {
    let u = scaled_orbit_point(lam, op, a, x)?;
    let mut distances = Vec::with_capacity(m as usize + 1);
    for j in 0..=m {
        let d = dist(&op.power_apply(j * ell, &u)?, &ball.center)?;
        if !(d < ball.radius) {
            return Ok(None);
        }
        distances.push(d);
    }
    Ok(Some(MRWitness {
        u,
        ell,
        m,
        a,
        k,
        center: ball.center.clone(),
        eps: ball.radius,
        distances,
    }))
}

pub fn mr_witness_search(
    x: &CoefVec,
    lam: &ScalingSeq,
    op: &ShiftOp,
    ball: &Ball,
    params: MrParams,
) -> Result<MrSearch> {
    let MrParams { m, tau, n_max, k_max } = params;
    if tau < 1 {
        return Err(LabError::pre("step multiplier tau must be at least 1"));
    }
    let horizon = n_max.max(100 * tau);
    let precondition = ratio_classify(lam, tau, horizon, DEFAULT_RATIO_TOL)?.verdict;
    if let Verdict::Bad(limit) = precondition {
        return Err(LabError::pre(format!(
            "ratio test for tau = {tau} reports a bad sequence (limit {limit:?})"
        )));
    }
    let half = Ball::new(ball.center.clone(), ball.radius / 2.0)?;
    let h = hitting_set(x, lam, op, &half, n_max)?;
    let mut diagnostics = MrDiagnostics {
        hits: h.len(),
        largest_ap: None,
        best_ratio_defect: None,
    };

    if m == 0 {
        for a in h.iter() {
            if let Some(witness) = check_candidate(x, lam, op, ball, 0, a, 1, tau)? {
                return Ok(MrSearch::Found { witness, precondition });
            }
        }
        return Ok(MrSearch::NotFound { diagnostics, precondition });
    }

    for k in 1..=k_max {
        let ell = tau * k;
        if m * ell >= n_max {
            break;
        }
        let starts = ap_k_members(&h, k, m, tau)?;
        if diagnostics.largest_ap.map_or(true, |(_, c)| starts.len() > c) && !starts.is_empty() {
            diagnostics.largest_ap = Some((k, starts.len()));
        }
        if starts.len() < 2 {
            continue;
        }
        for &a in &starts {
            let la = lam.eval_log(a)?;
            let mut worst: f64 = 0.0;
            for j in 1..=m {
                let b = a + j * ell;
                let lb = lam.eval_log(b)?;
                let uj = scaled_orbit_point(lam, op, b, x)?;
                let ratio = (la / lb).sub(&LogScalar::ONE).abs();
                worst = worst.max(ratio * norm(&uj)?);
            }
            if diagnostics.best_ratio_defect.map_or(true, |d| worst < d) {
                diagnostics.best_ratio_defect = Some(worst);
            }
            if worst < ball.radius / 2.0 {
                if let Some(witness) = check_candidate(x, lam, op, ball, m, a, k, ell)? {
                    return Ok(MrSearch::Found { witness, precondition });
                }
            }
        }
    }
    Ok(MrSearch::NotFound { diagnostics, precondition })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::Side;
    use num_complex::Complex64;

    #[test]
    fn contracting_operator_has_no_witness() {
        let op = ShiftOp::scaled_backward(Side::Unilateral, Complex64::new(0.9, 0.0));
        let x = CoefVec::from_complex(Side::Unilateral, (1..=40).map(|i| (i, Complex64::new(1.0, 0.0)))).unwrap();
        let ball = Ball::new(CoefVec::basis(Side::Unilateral, 1).unwrap(), 0.1).unwrap();
        let lam = ScalingSeq::constant(1.0);
        let params = MrParams { m: 2, tau: 1, n_max: 400, k_max: 50 };
        let r = mr_witness_search(&x, &lam, &op, &ball, params).unwrap();
        assert!(r.witness().is_none());
    }

    #[test]
    fn bad_sequence_is_rejected() {
        let op = ShiftOp::backward(Side::Unilateral);
        let x = CoefVec::basis(Side::Unilateral, 3).unwrap();
        let ball = Ball::new(x.clone(), 0.1).unwrap();
        // ratios 1/(n+1) fall below the 1e-4 tolerance only past n = 10^4
        let params = MrParams { m: 1, tau: 1, n_max: 30_000, k_max: 10 };
        let r = mr_witness_search(&x, &ScalingSeq::Factorial, &op, &ball, params);
        assert!(matches!(r, Err(LabError::Precondition(_))));
    }

    #[test]
    fn order_zero_takes_first_hit() {
        // 2B on x = sum 2^{-n} e_{n+1} over a few n: T^n x has e_1 coefficient 1
        let op = ShiftOp::scaled_backward(Side::Unilateral, Complex64::new(2.0, 0.0));
        let x = CoefVec::from_complex(
            Side::Unilateral,
            [5u32, 20, 40].iter().map(|&n| (n as i64 + 1, Complex64::new(0.5f64.powi(n as i32), 0.0))),
        )
        .unwrap();
        let ball = Ball::new(CoefVec::basis(Side::Unilateral, 1).unwrap(), 0.01).unwrap();
        let lam = ScalingSeq::constant(1.0);
        let params = MrParams { m: 0, tau: 1, n_max: 200, k_max: 10 };
        let r = mr_witness_search(&x, &lam, &op, &ball, params).unwrap();
        let w = r.witness().expect("witness");
        assert_eq!(w.a, 5);
        assert!(w.reverify(&op).unwrap());
    }
}
