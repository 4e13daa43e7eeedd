//! Multiple-recurrence witness: `a, a + ell, ..., a + m ell` all return to the
//! ball, with every step a multiple of `tau`.

use opdyn::builder::{build, BlockPlan};
use opdyn::orbits::{default_k_max, mr_witness_search, MrParams};
use opdyn::{Ball, CoefVec, Complex64, ScalingSeq, ShiftOp, Side};

fn main() -> opdyn::Result<()> {
    let u = Side::Unilateral;
    let y = CoefVec::basis(u, 1)?;
    let op = ShiftOp::scaled_backward(u, Complex64::new(2.0, 0.0));
    let lam = ScalingSeq::constant(1.0);
    let n_max = 100_000;
    let v = build(&lam, &op, BlockPlan::new(vec![(y.clone(), 1e-3)], Some(16))?, n_max)?;
    for (m, tau) in [(3, 1), (4, 5)] {
        let params = MrParams {
            m,
            tau,
            n_max,
            k_max: default_k_max(n_max, m, tau),
        };
        let r = mr_witness_search(v.x(), &lam, &op, &Ball::new(y.clone(), 0.01)?, params)?;
        match r.witness() {
            Some(w) => println!(
                "m = {m}, tau = {tau}: a = {}, ell = {}, max distance {:.2e}, re-verified {}",
                w.a,
                w.ell,
                w.distances.iter().cloned().fold(0.0, f64::max),
                w.reverify(&op)?
            ),
            None => println!("m = {m}, tau = {tau}: no witness"),
        }
    }
    Ok(())
}
