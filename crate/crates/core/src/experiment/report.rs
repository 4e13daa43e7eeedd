//! Scenario reports and the certificates embedded in them.
//!
//! A report holds only deterministic content: wall-clock timings are returned
//! separately as [`RunStats`] so that reruns produce byte-identical JSON.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::Scenario;
use crate::builder::{build, verify_fu, BlockPlan, FUVector, TargetReport};
use crate::criteria::{fhc_series_check, norm_decay_check, salas_check, DecayReport, SalasOutcome, SeriesVerdict};
use crate::error::{LabError, Result};
use crate::orbits::{hitting_set, recurrence_scan, APWitness, MRWitness, OrbitScanner};
use crate::sequence::{ratio_classify_on, RatioVerdict, ScalingSeq};
use crate::shift::{ProductKind, ProductTable, ShiftOp, WeightSeq};
use crate::symbol::{classify_adjoint, AdjointVerdict, PolySymbol, DEFAULT_WITNESS_TOL};
use crate::vector::{Ball, CoefVec, Side};

/// Everything needed to rebuild a frequently-universal vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuRecipe {
    pub lam: ScalingSeq,
    pub op: ShiftOp,
    pub targets: Vec<(CoefVec, f64)>,
    pub gap: u64,
    pub n_max: u64,
}

impl FuRecipe {
    pub fn build(&self) -> Result<FUVector> {
        let plan = BlockPlan::new(self.targets.clone(), Some(self.gap))?;
        build(&self.lam, &self.op, plan, self.n_max)
    }
}

/// Puts `x_k` at index `stride (k - 1) + 1`.
pub fn spread(x: &CoefVec, stride: u64) -> Result<CoefVec> {
    let mut out = CoefVec::zero(Side::Unilateral);
    for (k, v) in x.iter() {
        out.set(stride as i64 * (k - 1) + 1, v)?;
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub lower_est: f64,
    pub upper_est: f64,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Ratio {
        sequence: ScalingSeq,
        tau: u64,
        horizon: u64,
        tol: f64,
        even_only: bool,
        result: RatioVerdict,
    },
    FuBuild {
        recipe: FuRecipe,
        report: Vec<TargetReport>,
        densities: Vec<DensityRow>,
    },
    /// Block vector built for `op` at stride 1, spread out to `stride`, and
    /// scanned along `lam_n T^n` with `T = orbit_op`.
    SpreadOrbit {
        recipe: FuRecipe,
        stride: u64,
        lam: ScalingSeq,
        orbit_op: ShiftOp,
        n_max: u64,
        hits_on_multiples: u64,
        hits_elsewhere: u64,
    },
    Decay {
        op: ShiftOp,
        x: CoefVec,
        n_max: u64,
        result: DecayReport,
    },
    Recurrence {
        op: ShiftOp,
        x: CoefVec,
        eps: f64,
        n_max: u64,
        returns: Vec<u64>,
    },
    Salas {
        weights: WeightSeq,
        eps: f64,
        q: u64,
        n_max: u64,
        outcome: SalasOutcome,
    },
    ProductFormula {
        weights: WeightSeq,
        n_max: u64,
        max_error: f64,
        tol: f64,
    },
    Series {
        n_max: u64,
        cap: f64,
        verdict: SeriesVerdict,
    },
    Ap {
        recipe: FuRecipe,
        target: usize,
        witness: APWitness,
    },
    Mr {
        op: ShiftOp,
        witness: MRWitness,
    },
    Symbol {
        phi: PolySymbol,
        verdict: AdjointVerdict,
    },
}

/// `max_n |ln prod_{s=1..n} w_s - ln sqrt(n + 1)|` for the sqrt-ratio weights.
pub fn sqrt_ratio_product_error(n_max: u64) -> Result<f64> {
    let w = WeightSeq::SqrtRatio;
    let pt = ProductTable::with_range(&w, 0, n_max as i64 + 1)?;
    let mut worst: f64 = 0.0;
    for n in 1..=n_max {
        let got = pt.query(ProductKind::Forward { j: 0, n })?.log_mag();
        worst = worst.max((got - 0.5 * ((n + 1) as f64).ln()).abs());
    }
    Ok(worst)
}

fn even(n: u64) -> bool {
    n % 2 == 0
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Ratio { .. } => "ratio",
            Certificate::FuBuild { .. } => "fu_build",
            Certificate::SpreadOrbit { .. } => "spread_orbit",
            Certificate::Decay { .. } => "decay",
            Certificate::Recurrence { .. } => "recurrence",
            Certificate::Salas { .. } => "salas",
            Certificate::ProductFormula { .. } => "product_formula",
            Certificate::Series { .. } => "series",
            Certificate::Ap { .. } => "ap",
            Certificate::Mr { .. } => "mr",
            Certificate::Symbol { .. } => "symbol",
        }
    }

    /// Recomputes the certified facts from raw operations.
    pub fn reverify(&self) -> Result<bool> {
        Ok(match self {
            Certificate::Ratio {
                sequence,
                tau,
                horizon,
                tol,
                even_only,
                result,
            } => {
                let keep = |n: u64| !*even_only || even(n);
                ratio_classify_on(sequence, *tau, *horizon, *tol, keep)? == *result
            }
            Certificate::FuBuild {
                recipe,
                report,
                densities,
            } => {
                let v = recipe.build()?;
                let rows: Vec<DensityRow> = verify_fu(&v, None)?
                    .iter()
                    .map(|c| DensityRow {
                        lower_est: c.density.lower_est,
                        upper_est: c.density.upper_est,
                        count: c.density.count,
                    })
                    .collect();
                v.report() == report.as_slice() && rows == *densities
            }
            Certificate::SpreadOrbit {
                recipe,
                stride,
                lam,
                orbit_op,
                n_max,
                hits_on_multiples,
                hits_elsewhere,
            } => {
                let v = recipe.build()?;
                let (on, off, missing) = spread_orbit_hits(&v, *stride, lam, orbit_op, *n_max)?;
                missing == 0 && on == *hits_on_multiples && off == *hits_elsewhere
            }
            Certificate::Decay { op, x, n_max, result } => {
                let r = norm_decay_check(op, x, *n_max)?;
                r == *result && r.holds && r.separation > 0.0
            }
            Certificate::Recurrence {
                op,
                x,
                eps,
                n_max,
                returns,
            } => recurrence_scan(op, x, *eps, *n_max)? == *returns,
            Certificate::Salas {
                weights,
                eps,
                q,
                n_max,
                outcome,
            } => match outcome {
                SalasOutcome::Certified(c) => c.reverify()?,
                SalasOutcome::NotFound(_) => salas_check(weights, *eps, *q, *n_max)? == *outcome,
            },
            Certificate::ProductFormula {
                weights,
                n_max,
                max_error,
                tol,
            } => {
                *weights == WeightSeq::SqrtRatio
                    && sqrt_ratio_product_error(*n_max)? == *max_error
                    && *max_error <= *tol
            }
            Certificate::Series { n_max, cap, verdict } => {
                fhc_series_check(&verdict.weights, *n_max, *cap)? == *verdict
            }
            Certificate::Ap {
                recipe,
                target,
                witness,
            } => {
                let v = recipe.build()?;
                let (y, eps) = recipe
                    .targets
                    .get(*target)
                    .ok_or_else(|| LabError::arg("target index out of range"))?;
                let ball = Ball::new(y.clone(), *eps)?;
                let scanner = OrbitScanner::new(v.x(), &recipe.lam, &recipe.op, &ball, recipe.n_max)?;
                let mut ok = true;
                for n in witness.members() {
                    ok &= n <= recipe.n_max && scanner.contains(n)?;
                }
                ok
            }
            Certificate::Mr { op, witness } => witness.reverify(op)?,
            Certificate::Symbol { phi, verdict } => match &verdict.certificate {
                Some(c) => c.reverify(phi, DEFAULT_WITNESS_TOL) && classify_adjoint(phi)? == *verdict,
                None => classify_adjoint(phi)? == *verdict,
            },
        })
    }
}

/// Scans `lam_n T^n spread(x)` on `[1, n_max]` against the first target and
/// returns hits at multiples of `stride`, hits elsewhere, and planned misses.
pub fn spread_orbit_hits(
    v: &FUVector,
    stride: u64,
    lam: &ScalingSeq,
    orbit_op: &ShiftOp,
    n_max: u64,
) -> Result<(u64, u64, u64)> {
    let t = v
        .plan()
        .targets
        .first()
        .ok_or_else(|| LabError::pre("spread orbit needs a target"))?;
    let x = spread(v.x(), stride)?;
    let y = spread(&t.y, stride)?;
    let h = hitting_set(&x, lam, orbit_op, &Ball::new(y, t.eps)?, n_max)?;
    let on = h.iter().filter(|n| n % stride == 0).count() as u64;
    let off = h.len() as u64 - on;
    let missing = v
        .plan()
        .class(0, v.horizon())
        .into_iter()
        .filter(|&n| n * stride <= n_max && !h.contains(n * stride))
        .count() as u64;
    Ok((on, off, missing))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub csv: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: Scenario,
    pub title: String,
    pub checks: Vec<Check>,
    pub certificates: Vec<Certificate>,
    pub tables: Vec<Table>,
}

/// Timing kept out of the report body.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub elapsed_ms: u128,
    pub workers: usize,
}

impl Report {
    pub(crate) fn new(scenario: Scenario) -> Self {
        Report {
            scenario,
            title: scenario.title().into(),
            checks: Vec::new(),
            certificates: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub(crate) fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub(crate) fn table(&mut self, name: &str, csv: String) {
        self.tables.push(Table { name: name.into(), csv });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| LabError::parse(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| LabError::parse(e.to_string()))
    }

    /// Reads a report and re-verifies every embedded certificate.
    pub fn load(path: &Path) -> Result<(Self, Vec<(String, bool)>)> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::parse(format!("{}: {e}", path.display())))?;
        let r = Self::from_json(&text)?;
        let results = r.reverify_all()?;
        Ok((r, results))
    }

    pub fn reverify_all(&self) -> Result<Vec<(String, bool)>> {
        self.certificates
            .iter()
            .enumerate()
            .map(|(i, c)| Ok((format!("{}#{i}", c.kind()), c.reverify()?)))
            .collect()
    }

    /// Writes `<scenario>_report.json` plus one CSV per table into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let io = |e: std::io::Error| LabError::arg(format!("{}: {e}", dir.display()));
        std::fs::create_dir_all(dir).map_err(io)?;
        let stem = self.scenario.to_string();
        let mut written = Vec::new();
        let path = dir.join(format!("{stem}_report.json"));
        std::fs::write(&path, self.to_json()? + "\n").map_err(io)?;
        written.push(path);
        for t in &self.tables {
            let path = dir.join(format!("{stem}_{}.csv", t.name));
            std::fs::write(&path, &t.csv).map_err(io)?;
            written.push(path);
        }
        Ok(written)
    }

    /// Plain-text summary, one line per check.
    pub fn summary(&self) -> String {
        let mut s = format!("{} ({})\n", self.scenario, self.title);
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            s.push_str(&format!("  [{mark}] {}: {}\n", c.name, c.detail));
        }
        s
    }
}
