//! Good/bad ratio verdicts for a handful of scaling sequences.
//!
//! cargo run --example ratio_table

use opdyn::sequence::ratio_classify;
use opdyn::{Complex64, ScalingSeq};

fn main() -> opdyn::Result<()> {
    let families = [
        ("log n", ScalingSeq::LogPow { k: 1.0 }),
        ("e^(n^0.3)", ScalingSeq::ExpPow { a: 0.3 }),
        ("e^(n^0.9)", ScalingSeq::ExpPow { a: 0.9 }),
        ("e^n", ScalingSeq::ExpPow { a: 1.0 }),
        ("n!", ScalingSeq::Factorial),
        ("2^n", ScalingSeq::GeomInverse { a: Complex64::new(0.5, 0.0) }),
    ];
    println!("{:<12} {:<28} {:>12} {:>12}", "sequence", "verdict", "min ratio", "max ratio");
    for (name, seq) in &families {
        let r = ratio_classify(seq, 1, 1_000_000, 1e-4)?;
        println!(
            "{name:<12} {:<28} {:>12.6} {:>12.6}",
            format!("{:?}", r.verdict),
            r.min_log_ratio.exp(),
            r.max_log_ratio.exp()
        );
    }
    Ok(())
}
