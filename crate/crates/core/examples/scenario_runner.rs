//! Runs a scenario from the command line and re-verifies its certificates.
//!
//! cargo run --release --example scenario_runner -- E3

use opdyn::experiment::{run_scenario, ExperimentConfig, Scenario};

fn main() -> opdyn::Result<()> {
    let scenario: Scenario = std::env::args().nth(1).as_deref().unwrap_or("E7").parse()?;
    let (report, stats) = run_scenario(&ExperimentConfig::new(scenario))?;
    print!("{}", report.summary());
    for (name, ok) in report.reverify_all()? {
        println!("  certificate {name}: {}", if ok { "re-verified" } else { "MISMATCH" });
    }
    println!("{} ms on {} workers", stats.elapsed_ms, stats.workers);
    Ok(())
}
