use num_complex::Complex64;

use super::config::ExperimentConfig;
use super::report::{spread_orbit_hits, sqrt_ratio_product_error, Certificate, DensityRow, FuRecipe, Report};
use crate::builder::{fu_window_start, verify_fu, FUVector};
use crate::criteria::{fhc_series_check, norm_decay_check, salas_check, SalasOutcome, SeriesOutcome, DEFAULT_SERIES_CAP};
use crate::error::Result;
use crate::orbits::{default_k_max, find_ap, hitting_set, mr_witness_search, recurrence_scan, MrParams, MrSearch};
use crate::sequence::{ratio_classify, ratio_classify_on, Limit, ScalingSeq, Verdict, DEFAULT_RATIO_HORIZON, DEFAULT_RATIO_TOL};
use crate::shift::{ShiftOp, WeightSeq};
use crate::symbol::{classify_adjoint, AdjointClass, PolySymbol};
use crate::text;
use crate::vector::{Ball, Side};

fn fu_section(report: &mut Report, recipe: &FuRecipe) -> Result<Option<FUVector>> {
    let v = match recipe.build() {
        Ok(v) => v,
        Err(e) => {
            report.check("fu_build", false, e.to_string());
            return Ok(None);
        }
    };
    let planned: u64 = v.report().iter().map(|r| r.planned).sum();
    let worst = v.report().iter().map(|r| r.worst_distance).fold(0.0, f64::max);
    report.check(
        "fu_build",
        true,
        format!("{planned} planned hits verified, worst distance {worst:.3e}"),
    );
    let checks = match verify_fu(&v, None) {
        Ok(c) => c,
        Err(e) => {
            report.check("fu_verify", false, e.to_string());
            return Ok(None);
        }
    };
    let p = v.plan().period() as f64;
    // a residue class has c(N) within 1 of N/P, so c(N)/N is within 1/N0 of 1/P
    let tol = 0.002 + 1.0 / fu_window_start(v.horizon(), v.plan().period()) as f64;
    let mut densities = Vec::new();
    let mut all_close = true;
    for (i, c) in checks.iter().enumerate() {
        let d = &c.density;
        all_close &= (d.lower_est - 1.0 / p).abs() <= tol;
        densities.push(DensityRow {
            lower_est: d.lower_est,
            upper_est: d.upper_est,
            count: d.count,
        });
        report.table(&format!("density_target{i}"), d.to_csv());
        report.table(&format!("hits_target{i}"), c.hits.to_csv());
    }
    let lows: Vec<String> = densities.iter().map(|d| format!("{:.5}", d.lower_est)).collect();
    report.check(
        "fu_density",
        all_close,
        format!("lower density estimates [{}] against 1/P = {:.5} +- {tol:.5}", lows.join(", "), 1.0 / p),
    );
    report.certificates.push(Certificate::FuBuild {
        recipe: recipe.clone(),
        report: v.report().to_vec(),
        densities,
    });
    Ok(Some(v))
}

fn fu_recipe(
    cfg: &ExperimentConfig,
    lam: ScalingSeq,
    op: ShiftOp,
    default_gap: u64,
    default_n: u64,
) -> Result<FuRecipe> {
    Ok(FuRecipe {
        lam,
        op,
        targets: cfg.targets_or(Side::Unilateral, &[("e(1)", 1e-3)])?,
        gap: cfg.params.gap.unwrap_or(default_gap),
        n_max: cfg.horizons.n.unwrap_or(default_n),
    })
}

/// `lambda_n = w^{2n}`, `T = B / w`, `w = a^{-1/2}`.
pub(crate) fn e1(cfg: &ExperimentConfig) -> Result<Report> {
    let mut report = Report::new(cfg.scenario);
    let a = match &cfg.params.a {
        Some(s) => text::parse_complex(s)?,
        None => Complex64::new(0.5, 0.0),
    };
    if !(a.norm() > 0.0 && a.norm() < 1.0) {
        report.check("ratio_range", false, format!("need 0 < |a| < 1, got {a}"));
        return Ok(report);
    }
    let lam = ScalingSeq::power_of_w_from_ratio(a);
    let w = a.powf(-0.5);
    let op = cfg.operator_or(ShiftOp::scaled_backward(Side::Unilateral, 1.0 / w))?;
    let tol = cfg.tolerances.ratio.unwrap_or(DEFAULT_RATIO_TOL);
    let horizon = cfg.horizons.k.unwrap_or(DEFAULT_RATIO_HORIZON);
    let rv = ratio_classify(&lam, 1, horizon, tol)?;
    let bad_a = matches!(rv.verdict, Verdict::Bad(Limit::Finite(l)) if (l - a.norm()).abs() <= tol);
    report.check("ratio_bad", bad_a, format!("ratio test: {:?}", rv.verdict));
    report.certificates.push(Certificate::Ratio {
        sequence: lam.clone(),
        tau: 1,
        horizon,
        tol,
        even_only: false,
        result: rv,
    });

    let recipe = fu_recipe(cfg, lam, op.clone(), 24, 10_000)?;
    let Some(v) = fu_section(&mut report, &recipe)? else {
        return Ok(report);
    };
    let n_dec = 200.min(recipe.n_max);
    match norm_decay_check(&op, v.x(), n_dec) {
        Ok(d) => {
            report.check(
                "not_recurrent",
                d.holds && d.separation > 0.0,
                format!(
                    "||T^n x|| <= {:.6}^n ||x|| up to n = {n_dec}; ||T^n x - x|| >= {:.3e}",
                    d.rate, d.separation
                ),
            );
            report.certificates.push(Certificate::Decay {
                op,
                x: v.x().clone(),
                n_max: n_dec,
                result: d,
            });
        }
        Err(e) => report.check("not_recurrent", false, e.to_string()),
    }
    Ok(report)
}

/// `lambda_n = n!`, `T = B`.
pub(crate) fn e2(cfg: &ExperimentConfig) -> Result<Report> {
    let mut report = Report::new(cfg.scenario);
    let lam = cfg.scaling_or(ScalingSeq::Factorial)?;
    let op = cfg.operator_or(ShiftOp::backward(Side::Unilateral))?;
    let tol = cfg.tolerances.ratio.unwrap_or(DEFAULT_RATIO_TOL);
    let horizon = cfg.horizons.k.unwrap_or(DEFAULT_RATIO_HORIZON);
    let rv = ratio_classify(&lam, 1, horizon, tol)?;
    report.check(
        "ratio_bad",
        rv.verdict == Verdict::Bad(Limit::Zero),
        format!("ratio test: {:?}", rv.verdict),
    );
    report.certificates.push(Certificate::Ratio {
        sequence: lam.clone(),
        tau: 1,
        horizon,
        tol,
        even_only: false,
        result: rv,
    });

    let recipe = fu_recipe(cfg, lam, op.clone(), 10, 2000)?;
    let Some(v) = fu_section(&mut report, &recipe)? else {
        return Ok(report);
    };
    let eps = cfg.tolerances.eps.unwrap_or(0.5 * v.x().log_norm().exp());
    let returns = recurrence_scan(&op, v.x(), eps, recipe.n_max)?;
    report.check(
        "not_recurrent",
        returns.is_empty(),
        format!(
            "{} return times n <= {} with ||T^n x - x|| < {eps:.3e}",
            returns.len(),
            recipe.n_max
        ),
    );
    report.certificates.push(Certificate::Recurrence {
        op,
        x: v.x().clone(),
        eps,
        n_max: recipe.n_max,
        returns,
    });
    Ok(report)
}

/// `lambda_{2n} = lambda_{2n+1} = 2^n` with `B`; built through `(2B)^n`
/// acting on the odd coordinates.
pub(crate) fn e3(cfg: &ExperimentConfig) -> Result<Report> {
    let mut report = Report::new(cfg.scenario);
    let lam = ScalingSeq::GeomEvenOdd;
    let tol = cfg.tolerances.ratio.unwrap_or(DEFAULT_RATIO_TOL);
    let horizon = cfg.horizons.k.unwrap_or(DEFAULT_RATIO_HORIZON);
    let on_evens = ratio_classify_on(&lam, 1, horizon, tol, |n| n % 2 == 0)?;
    report.check(
        "ratio_on_evens",
        on_evens.verdict == Verdict::Good,
        format!("lambda_n / lambda_(n+1) over even n: {:?}", on_evens.verdict),
    );
    let full = ratio_classify(&lam, 1, horizon, tol)?;
    report.check(
        "ratio_unrestricted",
        full.verdict == Verdict::Inconclusive,
        format!(
            "over all n: {:?}, ratios in [{:.4}, {:.4}]",
            full.verdict,
            full.min_log_ratio.exp(),
            full.max_log_ratio.exp()
        ),
    );
    for (res, even_only) in [(on_evens, true), (full, false)] {
        report.certificates.push(Certificate::Ratio {
            sequence: lam.clone(),
            tau: 1,
            horizon,
            tol,
            even_only,
            result: res,
        });
    }

    let two_b = ShiftOp::scaled_backward(Side::Unilateral, Complex64::new(2.0, 0.0));
    let recipe = fu_recipe(cfg, ScalingSeq::constant(1.0), two_b, 16, 20_000)?;
    let Some(v) = fu_section(&mut report, &recipe)? else {
        return Ok(report);
    };
    let b = ShiftOp::backward(Side::Unilateral);
    let n_orbit = 2 * recipe.n_max;
    let (on, off, missing) = spread_orbit_hits(&v, 2, &lam, &b, n_orbit)?;
    let p = v.plan().period() as f64;
    let density = on as f64 / recipe.n_max as f64;
    report.check(
        "even_hits",
        missing == 0 && off == 0 && (density - 1.0 / p).abs() <= 0.002,
        format!(
            "{on} hits at even n <= {n_orbit} (density on evens {density:.5}, 1/P = {:.5}), {off} at odd n, {missing} planned misses",
            1.0 / p
        ),
    );
    report.certificates.push(Certificate::SpreadOrbit {
        recipe,
        stride: 2,
        lam,
        orbit_op: b,
        n_max: n_orbit,
        hits_on_multiples: on,
        hits_elsewhere: off,
    });
    Ok(report)
}

/// Step bilateral weights: universal but not hypercyclic.
pub(crate) fn e4(cfg: &ExperimentConfig) -> Result<Report> {
    let mut report = Report::new(cfg.scenario);
    let w = match &cfg.operator {
        Some(o) => o.weights.parse()?,
        None => WeightSeq::StepBilateral,
    };
    let eps = cfg.tolerances.eps.unwrap_or(0.5);
    let q = cfg.params.q.unwrap_or(0);
    let n_max = cfg.horizons.n.unwrap_or(10_000);
    let outcome = salas_check(&w, eps, q, n_max)?;
    let detail = match &outcome {
        SalasOutcome::Certified(c) => format!("Salas: certified at n = {}", c.n),
        SalasOutcome::NotFound(nf) => format!(
            "Salas: none found up to N_max={n_max} (best log margin {:.4} at n = {:?})",
            nf.best_log_margin, nf.best_n
        ),
    };
    report.check("salas_none", outcome.certificate().is_none(), detail);
    report.certificates.push(Certificate::Salas {
        weights: w,
        eps,
        q,
        n_max,
        outcome,
    });
    Ok(report)
}

/// Sqrt-ratio weights: products `sqrt(n + 1)`, divergent series.
pub(crate) fn e5(cfg: &ExperimentConfig) -> Result<Report> {
    let mut report = Report::new(cfg.scenario);
    let n_max = cfg.horizons.n.unwrap_or(1_000_000);
    let tol = 1e-9;
    let err = sqrt_ratio_product_error(n_max)?;
    report.check(
        "product_formula",
        err <= tol,
        format!("max |ln(w_1...w_n) - ln sqrt(n+1)| = {err:.3e} for n <= {n_max}"),
    );
    report.certificates.push(Certificate::ProductFormula {
        weights: WeightSeq::SqrtRatio,
        n_max,
        max_error: err,
        tol,
    });
    let cap = cfg.params.series_cap.unwrap_or(DEFAULT_SERIES_CAP);
    let v = fhc_series_check(&WeightSeq::SqrtRatio, n_max, cap)?;
    let detail = match &v.outcome {
        SeriesOutcome::DivergesObserved { partial_sum, at_n, .. } => {
            format!("series diverges: S_{at_n} = {partial_sum:.4} > {cap}")
        }
        other => format!("unexpected series outcome {other:?}"),
    };
    report.check(
        "series_diverges",
        matches!(v.outcome, SeriesOutcome::DivergesObserved { .. }),
        detail,
    );
    let mut csv = String::from("N,partial_sum\n");
    for (n, s) in &v.partial_sums {
        csv.push_str(&format!("{n},{s}\n"));
    }
    report.table("partial_sums", csv);
    report.certificates.push(Certificate::Series {
        n_max,
        cap,
        verdict: v,
    });
    Ok(report)
}

/// Progressions in a built hitting set and a multiple-recurrence witness.
pub(crate) fn e6(cfg: &ExperimentConfig) -> Result<Report> {
    let mut report = Report::new(cfg.scenario);
    let op = cfg.operator_or(ShiftOp::scaled_backward(Side::Unilateral, Complex64::new(2.0, 0.0)))?;
    let lam = cfg.scaling_or(ScalingSeq::constant(1.0))?;
    let recipe = fu_recipe(cfg, lam.clone(), op.clone(), 16, 100_000)?;
    let Some(v) = fu_section(&mut report, &recipe)? else {
        return Ok(report);
    };
    let (y, eps) = recipe.targets[0].clone();
    let n_max = recipe.n_max;
    let h = hitting_set(v.x(), &lam, &op, &Ball::new(y.clone(), eps)?, n_max)?;
    let period = v.plan().period();
    let tau = cfg.params.tau.unwrap_or(1);
    for m in cfg.params.m.clone().unwrap_or_else(|| vec![3, 4, 5]) {
        let k_max = cfg.horizons.k.unwrap_or_else(|| default_k_max(n_max, m, tau));
        match find_ap(&h, m, tau, k_max)? {
            Some(w) => {
                report.check(
                    &format!("ap_m{m}"),
                    (w.k * tau) % period == 0 && w.holds_in(&h),
                    format!("a = {}, k = {} (period {period})", w.a, w.k),
                );
                report.certificates.push(Certificate::Ap {
                    recipe: recipe.clone(),
                    target: 0,
                    witness: w,
                });
            }
            None => report.check(&format!("ap_m{m}"), false, format!("no progression with k <= {k_max}")),
        }
    }

    let mr_eps = cfg.params.mr_eps.unwrap_or(0.01);
    let m = 3;
    let params = MrParams {
        m,
        tau,
        n_max,
        k_max: default_k_max(n_max, m, tau),
    };
    match mr_witness_search(v.x(), &lam, &op, &Ball::new(y, mr_eps)?, params)? {
        MrSearch::Found { witness, .. } => {
            let ok = witness.reverify(&op)?;
            let worst = witness.distances.iter().copied().fold(0.0, f64::max);
            report.check(
                "mr_witness",
                ok,
                format!(
                    "u = lambda_{} T^{} x, ell = {}, max_j dist(T^(j ell) u, y) = {worst:.3e} < {mr_eps}",
                    witness.a, witness.a, witness.ell
                ),
            );
            report.certificates.push(Certificate::Mr { op, witness });
        }
        MrSearch::NotFound { diagnostics, .. } => {
            report.check("mr_witness", false, format!("no witness: {diagnostics:?}"))
        }
    }
    Ok(report)
}

pub const DEFAULT_SYMBOLS: [&str; 5] = ["[0, 0.5]", "[2, 1]", "[0.8, 1]", "[[0, 1]]", "[2]"];

/// Adjoint multipliers on the Hardy space.
pub(crate) fn e7(cfg: &ExperimentConfig) -> Result<Report> {
    let mut report = Report::new(cfg.scenario);
    let specs: Vec<String> = cfg
        .params
        .symbols
        .clone()
        .unwrap_or_else(|| DEFAULT_SYMBOLS.iter().map(|s| s.to_string()).collect());
    let mut csv = String::from("symbol,verdict\n");
    for s in specs {
        let phi: PolySymbol = s.parse()?;
        let verdict = classify_adjoint(&phi)?;
        let reverified = verdict
            .certificate
            .as_ref()
            .map_or(true, |c| c.reverify(&phi, crate::symbol::DEFAULT_WITNESS_TOL));
        report.check(
            &format!("symbol {phi}"),
            verdict.class != AdjointClass::Uncertain && reverified,
            verdict.class.to_string(),
        );
        csv.push_str(&format!("\"{phi}\",{}\n", verdict.class));
        report.certificates.push(Certificate::Symbol { phi, verdict });
    }
    report.table("symbols", csv);
    Ok(report)
}
