//! Product-condition checkers for bilateral shifts and the series test for
//! unilateral ones.

use opdyn::criteria::{fhc_series_check, mr_invertible_check, mr_shift_check, salas_check, DEFAULT_SERIES_CAP};
use opdyn::WeightSeq;

fn main() -> opdyn::Result<()> {
    let inv = WeightSeq::InverseStepBilateral;
    match salas_check(&inv, 0.5, 1, 1000)?.certificate() {
        Some(c) => println!("Salas, 1/2-2 weights: n = {} (re-verified {})", c.n, c.reverify()?),
        None => println!("Salas, 1/2-2 weights: none"),
    }
    let step = salas_check(&WeightSeq::StepBilateral, 0.5, 0, 10_000)?;
    println!("Salas, 1-2 weights: certified = {}", step.certificate().is_some());

    if let Some(c) = mr_shift_check(&inv, 3, 2, 0.1, 100)?.certificate() {
        println!("multiple recurrence m = 3: n = {}, {} product pairs", c.n, c.products.len());
    }
    let r = mr_invertible_check(&inv, 2, 60, 1e3)?;
    println!("invertible thresholds met for n in {:?}", r.n_values.first().zip(r.n_values.last()));

    for w in [WeightSeq::SqrtRatio, WeightSeq::ConstantW { c: 2.0 }] {
        let v = fhc_series_check(&w, 1_000_000, DEFAULT_SERIES_CAP)?;
        println!("{}: {:?} after {} terms", w.name(), v.outcome, v.n_used);
    }
    Ok(())
}
