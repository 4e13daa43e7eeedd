//! Weight products from the double-double table, and a shift applied to a
//! sparse vector.

use opdyn::{CoefVec, Complex64, ProductKind, ProductTable, ShiftOp, Side, WeightSeq};

fn main() -> opdyn::Result<()> {
    let pt = ProductTable::with_range(&WeightSeq::SqrtRatio, 0, 1_000_001)?;
    for n in [1u64, 10, 1000, 1_000_000] {
        let p = pt.query(ProductKind::Forward { j: 0, n })?;
        println!("w_1...w_{n} = {:.12}  (sqrt(n+1) = {:.12})", p.abs(), ((n + 1) as f64).sqrt());
    }

    let op = ShiftOp::new(Side::Bilateral, WeightSeq::InverseStepBilateral)?;
    let x = CoefVec::from_complex(Side::Bilateral, [(-2, Complex64::new(1.0, 0.0)), (3, Complex64::new(0.0, 1.0))])?;
    for n in [1u64, 5, 40] {
        let y = op.power_apply(n, &x)?;
        let entries: Vec<String> = y.iter().map(|(k, v)| format!("{k}: |{:.3e}|", v.abs())).collect();
        println!("T^{n} x = {{{}}}", entries.join(", "));
    }
    Ok(())
}
