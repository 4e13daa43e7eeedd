//! Orbit norm decay: `||T^n x||` against the operator-norm bound, and the
//! super-ratio bound for `lambda_n = 1/n!` under `2B`.

use opdyn::criteria::{norm_decay_check, superratio_decay_check};
use opdyn::{CoefVec, Complex64, ScalingSeq, ShiftOp, Side};

fn main() -> opdyn::Result<()> {
    let b = Side::Bilateral;
    let op = ShiftOp::scaled_backward(b, Complex64::new(0.9, 0.0));
    let d = norm_decay_check(&op, &CoefVec::basis(b, 5)?, 200)?;
    println!("0.9B on e_5: ratios in [{:.12}, {:.12}], holds {}", d.least_ratio, d.worst_ratio, d.holds);

    let u = Side::Unilateral;
    let x = CoefVec::from_complex(u, (1..=600).map(|k| (k, Complex64::new(1.0 / k as f64, 0.0))))?;
    let op = ShiftOp::scaled_backward(u, Complex64::new(2.0, 0.0));
    let lam = ScalingSeq::reciprocal(ScalingSeq::Factorial);
    let r = superratio_decay_check(&lam, &op, &x, 500)?;
    println!(
        "(1/n!) (2B)^n x: n_o = {}, min log slack {:.3}, ln norm at n = 500 is {:.1}",
        r.n_o, r.min_log_slack, r.last_log_norm
    );
    Ok(())
}
