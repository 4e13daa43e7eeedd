//! Hitting set of `lambda_n T^n x` in a ball and its windowed densities.

use opdyn::builder::{build, BlockPlan};
use opdyn::orbits::{default_window_start, density_stats, hitting_set};
use opdyn::{Ball, CoefVec, Complex64, ScalingSeq, ShiftOp, Side};

fn main() -> opdyn::Result<()> {
    let n_max = 50_000;
    let y = CoefVec::basis(Side::Unilateral, 1)?;
    let op = ShiftOp::scaled_backward(Side::Unilateral, Complex64::new(2.0, 0.0));
    let lam = ScalingSeq::constant(1.0);
    let v = build(&lam, &op, BlockPlan::new(vec![(y.clone(), 1e-3)], Some(12))?, n_max)?;

    let h = hitting_set(v.x(), &lam, &op, &Ball::new(y, 1e-3)?, n_max)?;
    let d = density_stats(&h, default_window_start(n_max))?;
    println!("{} hits in [1, {n_max}], first few: {:?}", h.len(), h.iter().take(6).collect::<Vec<_>>());
    println!("density in [{:.5}, {:.5}] over N >= {}", d.lower_est, d.upper_est, d.n0);
    print!("{}", d.to_csv());
    Ok(())
}
