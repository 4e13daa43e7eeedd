//! Command-line front end for the `opdyn` library.
//!
//! Exit codes: 0 success, 2 bad input, 3 a check or assertion failed,
//! 4 resource cap exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use opdyn::builder::{build, verify_fu, BlockPlan, FUVector};
use opdyn::criteria::{
    fhc_series_check, mr_invertible_check, mr_shift_check, salas_check, SeriesOutcome, DEFAULT_SERIES_CAP,
};
use opdyn::experiment::{run_scenario, ExperimentConfig, Report, Scenario, MAX_HORIZON};
use opdyn::orbits::{
    default_k_max, find_ap, hitting_set, mr_witness_search, HittingSet, MrParams,
};
use opdyn::sequence::{ratio_classify_on, DEFAULT_RATIO_HORIZON, DEFAULT_RATIO_TOL};
use opdyn::symbol::{classify_adjoint, PolySymbol};
use opdyn::vector::parse_vector;
use opdyn::{parse_complex, Ball, CoefVec, LabError, ScalingSeq, ShiftOp, Side, Verdict, WeightSeq};

#[derive(Parser)]
#[command(name = "opdyn", version, about = "Orbits, hitting sets and criteria for scaled weighted shifts")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario (E1-E7) and write its report and CSV files.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        scenario: Option<Scenario>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Good/bad ratio test for a scaling sequence such as "exp_pow a=1.5".
    ClassifySeq {
        spec: String,
        #[arg(long, default_value_t = 1)]
        tau: u64,
        #[arg(long, default_value_t = DEFAULT_RATIO_HORIZON)]
        n: u64,
        #[arg(long, default_value_t = DEFAULT_RATIO_TOL)]
        tol: f64,
        /// Only test ratios at even n.
        #[arg(long)]
        even_only: bool,
    },
    /// Salas condition for a bilateral weighted shift.
    CheckSalas {
        #[arg(long)]
        weights: String,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        q: u64,
        #[arg(long, default_value_t = 10_000)]
        n_max: u64,
    },
    /// Multiple-recurrence product conditions for a bilateral weighted shift.
    CheckMr {
        #[arg(long)]
        weights: String,
        #[arg(long, default_value_t = 1)]
        m: u64,
        #[arg(long, default_value_t = 0)]
        q: u64,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 1000)]
        n_max: u64,
        /// List every n passing the invertible-shift thresholds instead.
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Partial sums of sum (w_1 ... w_n)^-2.
    CheckSeries {
        #[arg(long)]
        weights: String,
        #[arg(long, default_value_t = 1_000_000)]
        n_max: u64,
        #[arg(long, default_value_t = DEFAULT_SERIES_CAP)]
        cap: f64,
    },
    /// Arithmetic progressions in a hitting set.
    ApFind {
        /// CSV with a single `n` column, as written by other commands.
        #[arg(long)]
        hits: Option<PathBuf>,
        #[command(flatten)]
        orbit: OrbitArgs,
        #[arg(long, default_value_t = 3)]
        m: u64,
        #[arg(long, default_value_t = 1)]
        tau: u64,
        #[arg(long)]
        k_max: Option<u64>,
    },
    /// Build and verify a frequently-universal vector.
    BuildFu {
        #[arg(long, default_value = "constant c=1")]
        scaling: String,
        #[arg(long, default_value = "unweighted")]
        weights: String,
        #[arg(long, default_value = "1")]
        premult: String,
        /// Target vector, repeatable; pairs with --eps in order.
        #[arg(long = "target", required = true)]
        targets: Vec<String>,
        #[arg(long = "eps", required = true)]
        eps: Vec<f64>,
        #[arg(long)]
        gap: Option<u64>,
        #[arg(long, default_value_t = 100_000)]
        n_max: u64,
        /// Write the vector as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a multiple-recurrence witness.
    MrWitness {
        /// A vector written by `build-fu --out`; overrides the orbit flags.
        #[arg(long)]
        fu: Option<PathBuf>,
        #[command(flatten)]
        orbit: OrbitArgs,
        #[arg(long, default_value_t = 3)]
        m: u64,
        #[arg(long, default_value_t = 1)]
        tau: u64,
        #[arg(long)]
        k_max: Option<u64>,
    },
    /// Classify the adjoint of a polynomial multiplier, e.g. "[0.8, 1]".
    ClassifySymbol { coeffs: String },
    /// Re-verify every certificate in a report.
    Verify { report: PathBuf },
}

#[derive(Args)]
struct OrbitArgs {
    #[arg(long, default_value = "e(1)")]
    vector: String,
    #[arg(long, default_value = "constant c=1")]
    scaling: String,
    #[arg(long, default_value = "unweighted")]
    weights: String,
    #[arg(long, default_value = "1")]
    premult: String,
    #[arg(long, default_value = "unilateral")]
    side: String,
    #[arg(long, default_value = "e(1)")]
    center: String,
    #[arg(long = "radius", default_value_t = 0.01)]
    radius: f64,
    #[arg(long, default_value_t = 10_000)]
    n_max: u64,
}

impl Cmd {
    fn horizon(&self) -> Option<u64> {
        match self {
            Cmd::ClassifySeq { n, .. } => Some(*n),
            Cmd::CheckSalas { n_max, .. }
            | Cmd::CheckMr { n_max, .. }
            | Cmd::CheckSeries { n_max, .. }
            | Cmd::BuildFu { n_max, .. } => Some(*n_max),
            Cmd::ApFind { orbit, .. } | Cmd::MrWitness { orbit, .. } => Some(orbit.n_max),
            _ => None,
        }
    }
}

struct Orbit {
    x: CoefVec,
    lam: ScalingSeq,
    op: ShiftOp,
    ball: Ball,
    n_max: u64,
}

fn side(s: &str) -> opdyn::Result<Side> {
    serde_json::from_value(serde_json::Value::String(s.into()))
        .map_err(|_| LabError::Parse(format!("unknown side {s:?}")))
}

impl OrbitArgs {
    fn resolve(&self) -> opdyn::Result<Orbit> {
        let side = side(&self.side)?;
        let w: WeightSeq = self.weights.parse()?;
        Ok(Orbit {
            x: parse_vector(side, &self.vector)?,
            lam: self.scaling.parse()?,
            op: ShiftOp::with_premultiplier(side, w, parse_complex(&self.premult)?)?,
            ball: Ball::new(parse_vector(side, &self.center)?, self.radius)?,
            n_max: self.n_max,
        })
    }
}

fn print<T: Serialize + ?Sized>(json: bool, value: &T, text: String) -> opdyn::Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(value).map_err(|e| LabError::Parse(e.to_string()))?);
    } else {
        print!("{text}");
    }
    Ok(())
}

fn read_hits(path: &PathBuf, n_max: u64) -> opdyn::Result<HittingSet> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::Parse(format!("{}: {e}", path.display())))?;
    let mut ns = Vec::new();
    for line in text.lines().skip(1).filter(|l| !l.trim().is_empty()) {
        ns.push(line.trim().parse::<u64>().map_err(|e| LabError::Parse(format!("{line:?}: {e}")))?);
    }
    let n_max = ns.iter().copied().max().unwrap_or(0).max(n_max);
    HittingSet::from_indices(n_max, ns)
}

/// Returns whether the command's own check passed.
fn dispatch(cli: Cli) -> opdyn::Result<bool> {
    let json = cli.json;
    if let Some(n) = cli.cmd.horizon().filter(|&n| n > MAX_HORIZON) {
        return Err(LabError::ResourceCap(format!("horizon {n} exceeds {MAX_HORIZON}")));
    }
    match cli.cmd {
        Cmd::Run {
            config,
            scenario,
            out,
            workers,
        } => {
            let mut cfg = match (&config, scenario) {
                (Some(path), _) => ExperimentConfig::load(path)?,
                (None, Some(s)) => ExperimentConfig::new(s),
                (None, None) => return Err(LabError::InvalidArgument("need --config or --scenario".into())),
            };
            // flags fill what the config leaves open
            if cfg.workers.is_none() {
                cfg.workers = workers;
            }
            if cfg.output.dir.is_none() {
                cfg.output.dir = out;
            }
            let (report, stats) = run_scenario(&cfg)?;
            let dir = cfg.output.dir.clone().unwrap_or_else(|| PathBuf::from("out"));
            let written = report.write(&dir)?;
            print(json, &report, report.summary())?;
            eprintln!(
                "wrote {} files to {} ({} ms, {} workers)",
                written.len(),
                dir.display(),
                stats.elapsed_ms,
                stats.workers
            );
            for f in report.failures() {
                eprintln!("assertion failed: {}: {}", f.name, f.detail);
            }
            Ok(report.passed())
        }
        Cmd::ClassifySeq {
            spec,
            tau,
            n,
            tol,
            even_only,
        } => {
            let seq: ScalingSeq = spec.parse()?;
            let r = ratio_classify_on(&seq, tau, n, tol, |k| !even_only || k % 2 == 0)?;
            let mut text = format!(
                "{spec}: {:?}\nwindow [{}, {}], {} ratios in [{:.6e}, {:.6e}]\ntail ratios:",
                r.verdict,
                r.window.0,
                r.window.1,
                r.samples,
                r.min_log_ratio.exp(),
                r.max_log_ratio.exp()
            );
            for t in r.tail_ratios() {
                text.push_str(&format!(" {t:.6e}"));
            }
            text.push('\n');
            print(json, &r, text)?;
            Ok(r.verdict != Verdict::Inconclusive)
        }
        Cmd::CheckSalas { weights, eps, q, n_max } => {
            let w: WeightSeq = weights.parse()?;
            let r = salas_check(&w, eps, q, n_max)?;
            let text = match r.certificate() {
                Some(c) => format!("Salas: certified at n = {} (re-verified: {})\n", c.n, c.reverify()?),
                None => format!("Salas: none found up to N_max={n_max}\n"),
            };
            print(json, &r, text)?;
            Ok(true)
        }
        Cmd::CheckMr {
            weights,
            m,
            q,
            eps,
            n_max,
            threshold,
        } => {
            let w: WeightSeq = weights.parse()?;
            if let Some(g) = threshold {
                let r = mr_invertible_check(&w, m, n_max, g)?;
                let text = match (r.n_values.first(), r.n_values.last()) {
                    (Some(a), Some(b)) => format!("{} values of n in [{a}, {b}]\n", r.n_values.len()),
                    _ => format!("no n <= {n_max} passes\n"),
                };
                print(json, &r, text)?;
                return Ok(true);
            }
            let r = mr_shift_check(&w, m, q, eps, n_max)?;
            let text = match r.certificate() {
                Some(c) => format!(
                    "certified at n = {} with {} product pairs (re-verified: {})\n",
                    c.n,
                    c.products.len(),
                    c.reverify()?
                ),
                None => format!("none found up to N_max={n_max}\n"),
            };
            print(json, &r, text)?;
            Ok(true)
        }
        Cmd::CheckSeries { weights, n_max, cap } => {
            let w: WeightSeq = weights.parse()?;
            let v = fhc_series_check(&w, n_max, cap)?;
            let text = match &v.outcome {
                SeriesOutcome::ConvergesCertified { sum, tail_bound, .. } => {
                    format!("converges: sum {sum:.12} (tail <= {tail_bound:.3e})\n")
                }
                SeriesOutcome::DivergesObserved { partial_sum, at_n, .. } => {
                    format!("diverges: S_{at_n} = {partial_sum:.6} > {cap}\n")
                }
                SeriesOutcome::Inconclusive { partial_sum } => {
                    format!("inconclusive: S_{} = {partial_sum:.6}\n", v.n_used)
                }
            };
            print(json, &v, text)?;
            Ok(true)
        }
        Cmd::ApFind {
            hits,
            orbit,
            m,
            tau,
            k_max,
        } => {
            let h = match &hits {
                Some(p) => read_hits(p, orbit.n_max)?,
                None => {
                    let o = orbit.resolve()?;
                    hitting_set(&o.x, &o.lam, &o.op, &o.ball, o.n_max)?
                }
            };
            let k_max = k_max.unwrap_or_else(|| default_k_max(h.n_max(), m, tau));
            let w = find_ap(&h, m, tau, k_max)?;
            let text = match &w {
                Some(w) => format!("a = {}, k = {}: {:?}\n", w.a, w.k, w.members()),
                None => format!("no {}-term progression with k <= {k_max} among {} hits\n", m + 1, h.len()),
            };
            print(json, &w, text)?;
            Ok(w.is_some())
        }
        Cmd::BuildFu {
            scaling,
            weights,
            premult: p,
            targets,
            eps,
            gap,
            n_max,
            out,
        } => {
            if targets.len() != eps.len() {
                return Err(LabError::InvalidArgument("give one --eps per --target".into()));
            }
            let lam: ScalingSeq = scaling.parse()?;
            let op = ShiftOp::with_premultiplier(Side::Unilateral, weights.parse()?, parse_complex(&p)?)?;
            let ts = targets
                .iter()
                .zip(&eps)
                .map(|(t, &e)| Ok((parse_vector(Side::Unilateral, t)?, e)))
                .collect::<opdyn::Result<Vec<_>>>()?;
            let v = build(&lam, &op, BlockPlan::new(ts, gap)?, n_max)?;
            let checks = verify_fu(&v, None)?;
            let mut text = format!("gap {}, period {}\n", v.plan().gap, v.plan().period());
            for (i, (r, c)) in v.report().iter().zip(&checks).enumerate() {
                text.push_str(&format!(
                    "target {i}: {}/{} planned hits, worst distance {:.3e}, density in [{:.5}, {:.5}]\n",
                    r.hits, r.planned, r.worst_distance, c.density.lower_est, c.density.upper_est
                ));
            }
            if let Some(path) = out {
                let body = serde_json::to_string(&v).map_err(|e| LabError::Parse(e.to_string()))?;
                std::fs::write(&path, body).map_err(|e| LabError::InvalidArgument(format!("{}: {e}", path.display())))?;
            }
            print(json, v.report(), text)?;
            Ok(true)
        }
        Cmd::MrWitness {
            fu,
            orbit,
            m,
            tau,
            k_max,
        } => {
            let mut o = orbit.resolve()?;
            if let Some(path) = fu {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| LabError::Parse(format!("{}: {e}", path.display())))?;
                let v: FUVector = serde_json::from_str(&text).map_err(|e| LabError::Parse(e.to_string()))?;
                o.x = v.x().clone();
                o.lam = v.sequence().clone();
                o.op = v.operator().clone();
                o.n_max = v.horizon();
            }
            let params = MrParams {
                m,
                tau,
                n_max: o.n_max,
                k_max: k_max.unwrap_or_else(|| default_k_max(o.n_max, m, tau)),
            };
            let r = mr_witness_search(&o.x, &o.lam, &o.op, &o.ball, params)?;
            let text = match r.witness() {
                Some(w) => format!(
                    "witness u = lambda_{} T^{} x, ell = {}, distances {:?} (re-verified: {})\n",
                    w.a,
                    w.a,
                    w.ell,
                    w.distances,
                    w.reverify(&o.op)?
                ),
                None => "no witness found\n".to_string(),
            };
            print(json, &r, text)?;
            Ok(r.witness().is_some())
        }
        Cmd::ClassifySymbol { coeffs } => {
            let phi: PolySymbol = coeffs.parse()?;
            let v = classify_adjoint(&phi)?;
            print(json, &v, format!("{phi}: {}\n", v.class))?;
            Ok(true)
        }
        Cmd::Verify { report } => {
            let (r, results) = Report::load(&report)?;
            let mut text = format!("{} certificates in {} report\n", results.len(), r.scenario);
            for (name, ok) in &results {
                text.push_str(&format!("  {name}: {}\n", if *ok { "ok" } else { "FAILED" }));
            }
            print(json, &results, text)?;
            Ok(results.iter().all(|(_, ok)| *ok))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                LabError::Parse(_) | LabError::InvalidArgument(_) => 2,
                LabError::ResourceCap(_) => 4,
                _ => 3,
            })
        }
    }
}
