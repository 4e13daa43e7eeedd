//! Builds a vector whose orbit under `2B` visits three balls along residue
//! classes of period 48, then re-scans the orbit to check the plan.

use opdyn::builder::{build, verify_fu, BlockPlan};
use opdyn::{CoefVec, Complex64, ScalingSeq, ShiftOp, Side};

fn main() -> opdyn::Result<()> {
    let u = Side::Unilateral;
    let one = Complex64::new(1.0, 0.0);
    let targets = vec![
        (CoefVec::basis(u, 1)?, 1e-3),
        (CoefVec::from_complex(u, [(1, one), (2, one)])?, 1e-3),
        (CoefVec::basis(u, 2)?, 1e-3),
    ];
    let plan = BlockPlan::new(targets, Some(16))?;
    let op = ShiftOp::scaled_backward(u, Complex64::new(2.0, 0.0));
    let v = build(&ScalingSeq::constant(1.0), &op, plan, 100_000)?;
    println!("x has {} nonzero coordinates, period {}", v.x().len(), v.plan().period());
    for (i, (r, c)) in v.report().iter().zip(verify_fu(&v, None)?).enumerate() {
        println!(
            "target {i}: {}/{} planned hits, worst distance {:.2e}, density in [{:.5}, {:.5}]",
            r.hits, r.planned, r.worst_distance, c.density.lower_est, c.density.upper_est
        );
    }
    Ok(())
}
