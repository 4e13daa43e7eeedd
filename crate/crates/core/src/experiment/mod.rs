//! Config-driven scenarios E1-E7 and their reports.
//!
//! | id | pipeline |
//! |----|----------|
//! | E1 | `lambda_n = w^{2n}`, `T = B/w`: build, density, norm decay |
//! | E2 | `lambda_n = n!`, `T = B`: build, density, empty return-time scan |
//! | E3 | `lambda_{2n} = 2^n`, `T = B`: build through `2B^2`, hits on evens |
//! | E4 | step bilateral weights: Salas search comes up empty |
//! | E5 | sqrt-ratio weights: product formula, divergent series |
//! | E6 | `T = 2B`: build, progressions, multiple-recurrence witness |
//! | E7 | adjoint multipliers: range-vs-circle classification |

mod config;
mod report;
mod scenarios;

use std::time::Instant;

pub use config::{
    ExperimentConfig, Horizons, OperatorSpec, Output, Params, Scenario, TargetSpec, Tolerances,
    MAX_HORIZON, MAX_WORKERS,
};
pub use report::{
    spread, spread_orbit_hits, sqrt_ratio_product_error, Certificate, Check, DensityRow, FuRecipe,
    Report, RunStats, Table,
};
pub use scenarios::DEFAULT_SYMBOLS;

use crate::error::{LabError, Result};

/// Runs the configured scenario on a dedicated pool of `cfg.workers` threads
/// (all available cores when unset).
pub fn run_scenario(cfg: &ExperimentConfig) -> Result<(Report, RunStats)> {
    cfg.validate()?;
    let workers = cfg.workers.unwrap_or_else(rayon::current_num_threads);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| LabError::ResourceCap(e.to_string()))?;
    let start = Instant::now();
    let report = pool.install(|| match cfg.scenario {
        Scenario::E1 => scenarios::e1(cfg),
        Scenario::E2 => scenarios::e2(cfg),
        Scenario::E3 => scenarios::e3(cfg),
        Scenario::E4 => scenarios::e4(cfg),
        Scenario::E5 => scenarios::e5(cfg),
        Scenario::E6 => scenarios::e6(cfg),
        Scenario::E7 => scenarios::e7(cfg),
    })?;
    let stats = RunStats {
        elapsed_ms: start.elapsed().as_millis(),
        workers,
    };
    Ok((report, stats))
}
