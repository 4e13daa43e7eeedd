//! Scaling sequences `lambda_n`, evaluated exactly in log domain, and the
//! windowed ratio-limit classifier separating good from bad sequences.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::logscalar::LogScalar;
use crate::text::{self, de_complex, de_complex_vec, de_f64};

pub const DEFAULT_RATIO_TOL: f64 = 1e-4;
pub const DEFAULT_RATIO_HORIZON: u64 = 1_000_000;

/// Angle generator for unimodular rotations `n -> theta_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AngleGen {
    Constant {
        #[serde(deserialize_with = "de_f64")]
        theta: f64,
    },
    /// `theta_n = slope * n + offset`
    Linear {
        #[serde(deserialize_with = "de_f64")]
        slope: f64,
        #[serde(default, deserialize_with = "de_f64")]
        offset: f64,
    },
}

impl AngleGen {
    pub fn at(&self, n: u64) -> f64 {
        match *self {
            AngleGen::Constant { theta } => theta,
            AngleGen::Linear { slope, offset } => slope * n as f64 + offset,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ScalingSeq {
    Constant {
        #[serde(deserialize_with = "de_complex")]
        c: Complex64,
    },
    /// `(log n)^k`; for `k < 0` the domain starts at 2.
    LogPow {
        #[serde(deserialize_with = "de_f64")]
        k: f64,
    },
    LogLog,
    /// `P(n)/Q(n)`, coefficients low-degree first.
    RationalPoly {
        #[serde(deserialize_with = "de_complex_vec")]
        p: Vec<Complex64>,
        #[serde(deserialize_with = "de_complex_vec")]
        q: Vec<Complex64>,
    },
    /// `e^{n^a}`
    ExpPow {
        #[serde(deserialize_with = "de_f64")]
        a: f64,
    },
    ExpOverLog,
    ExpOverLogLog,
    Factorial,
    /// `lambda_{2n} = lambda_{2n+1} = 2^n`
    GeomEvenOdd,
    /// `lambda_n = 2^{2^k}` for `n` in `[2^{k-1}, 2^k)`
    DyadicTower,
    /// `lambda_n = w^{2n}`
    PowerOfW {
        #[serde(deserialize_with = "de_complex")]
        w: Complex64,
    },
    /// `lambda_n = a^{-n}`
    GeomInverse {
        #[serde(deserialize_with = "de_complex")]
        a: Complex64,
    },
    /// Explicit values for `n = 1..=len`.
    Table { values: Vec<LogScalar> },
    /// `n -> e^{i theta_n} * base(n)`
    Rotated {
        base: Box<ScalingSeq>,
        theta: AngleGen,
    },
    /// `n -> 1 / base(n)`
    Reciprocal { base: Box<ScalingSeq> },
}

impl ScalingSeq {
    pub fn constant(c: f64) -> Self {
        ScalingSeq::Constant {
            c: Complex64::new(c, 0.0),
        }
    }

    /// The geometric family `w^{2n}` with `w = a^{-1/2}` (principal root), whose
    /// consecutive ratios equal `a`.
    pub fn power_of_w_from_ratio(a: Complex64) -> Self {
        ScalingSeq::PowerOfW { w: a.powf(-0.5) }
    }

    pub fn table_real(values: &[f64]) -> Self {
        ScalingSeq::Table {
            values: values.iter().map(|&v| LogScalar::from_real(v)).collect(),
        }
    }

    pub fn reciprocal(base: ScalingSeq) -> Self {
        ScalingSeq::Reciprocal {
            base: Box::new(base),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScalingSeq::Constant { .. } => "constant",
            ScalingSeq::LogPow { .. } => "log_pow",
            ScalingSeq::LogLog => "log_log",
            ScalingSeq::RationalPoly { .. } => "rational_poly",
            ScalingSeq::ExpPow { .. } => "exp_pow",
            ScalingSeq::ExpOverLog => "exp_over_log",
            ScalingSeq::ExpOverLogLog => "exp_over_log_log",
            ScalingSeq::Factorial => "factorial",
            ScalingSeq::GeomEvenOdd => "geom_even_odd",
            ScalingSeq::DyadicTower => "dyadic_tower",
            ScalingSeq::PowerOfW { .. } => "power_of_w",
            ScalingSeq::GeomInverse { .. } => "geom_inverse",
            ScalingSeq::Table { .. } => "table",
            ScalingSeq::Rotated { .. } => "rotated",
            ScalingSeq::Reciprocal { .. } => "reciprocal",
        }
    }

    /// First index at which the family is defined.
    pub fn min_index(&self) -> u64 {
        match self {
            ScalingSeq::LogPow { k } if *k < 0.0 => 2,
            ScalingSeq::ExpOverLog => 2,
            ScalingSeq::LogLog | ScalingSeq::ExpOverLogLog => 3,
            ScalingSeq::Rotated { base, .. } | ScalingSeq::Reciprocal { base } => {
                base.min_index()
            }
            _ => 1,
        }
    }

    /// `lambda_n` as a log-domain scalar.
    pub fn eval_log(&self, n: u64) -> Result<LogScalar> {
        let min = self.min_index();
        if n < min {
            return Err(LabError::Domain {
                family: self.name(),
                index: n as i64,
                min: min as i64,
            });
        }
        let nf = n as f64;
        Ok(match self {
            ScalingSeq::Constant { c } => LogScalar::from_complex(*c),
            ScalingSeq::LogPow { k } => {
                let l = nf.ln();
                if l == 0.0 {
                    // n = 1 with k >= 0
                    if *k == 0.0 {
                        LogScalar::ONE
                    } else {
                        LogScalar::ZERO
                    }
                } else {
                    LogScalar::from_log(k * l.ln(), 0.0)
                }
            }
            ScalingSeq::LogLog => LogScalar::from_real(nf.ln().ln()),
            ScalingSeq::RationalPoly { p, q } => {
                let num = poly_log_at(p, nf);
                let den = poly_log_at(q, nf);
                if den.is_zero() {
                    return Err(LabError::Domain {
                        family: "rational_poly",
                        index: n as i64,
                        min: min as i64,
                    });
                }
                num / den
            }
            ScalingSeq::ExpPow { a } => LogScalar::from_log(nf.powf(*a), 0.0),
            ScalingSeq::ExpOverLog => LogScalar::from_log(nf / nf.ln(), 0.0),
            ScalingSeq::ExpOverLogLog => LogScalar::from_log(nf / nf.ln().ln(), 0.0),
            ScalingSeq::Factorial => LogScalar::from_log(libm::lgamma(nf + 1.0), 0.0),
            ScalingSeq::GeomEvenOdd => LogScalar::from_log((n / 2) as f64 * LN_2, 0.0),
            ScalingSeq::DyadicTower => {
                // n in [2^{k-1}, 2^k)  <=>  k = floor(log2 n) + 1
                let k = 64 - n.leading_zeros();
                LogScalar::from_log(2f64.powi(k as i32) * LN_2, 0.0)
            }
            ScalingSeq::PowerOfW { w } => LogScalar::from_complex(*w).powi(2 * n),
            ScalingSeq::GeomInverse { a } => LogScalar::from_complex(*a).recip().powi(n),
            ScalingSeq::Table { values } => {
                *values.get((n - 1) as usize).ok_or(LabError::Domain {
                    family: "table",
                    index: n as i64,
                    min: 1,
                })?
            }
            ScalingSeq::Rotated { base, theta } => {
                base.eval_log(n)? * LogScalar::unimodular(theta.at(n))
            }
            ScalingSeq::Reciprocal { base } => {
                let v = base.eval_log(n)?;
                if v.is_zero() {
                    return Err(LabError::Domain {
                        family: "reciprocal",
                        index: n as i64,
                        min: min as i64,
                    });
                }
                v.recip()
            }
        })
    }

    /// Upper end of the evaluable range, if finite.
    pub fn max_index(&self) -> Option<u64> {
        match self {
            ScalingSeq::Table { values } => Some(values.len() as u64),
            ScalingSeq::Rotated { base, .. } | ScalingSeq::Reciprocal { base } => {
                base.max_index()
            }
            _ => None,
        }
    }
}

/// `sum_j c_j x^j` evaluated at a positive real in log form, factoring out the
/// leading power so large `x` cannot overflow.
fn poly_log_at(coeffs: &[Complex64], x: f64) -> LogScalar {
    let Some(deg) = coeffs.iter().rposition(|c| c.re != 0.0 || c.im != 0.0) else {
        return LogScalar::ZERO;
    };
    let inv = 1.0 / x;
    let mut acc = Complex64::new(0.0, 0.0);
    for c in &coeffs[..=deg] {
        acc = acc * inv + c;
    }
    LogScalar::from_complex(acc).scale_log(deg as f64 * x.ln())
}

/// `n -> e^{i theta_n} lambda_n`; magnitudes are untouched.
pub fn rotate_seq(seq: &ScalingSeq, theta: AngleGen) -> ScalingSeq {
    ScalingSeq::Rotated {
        base: Box::new(seq.clone()),
        theta,
    }
}

impl fmt::Display for ScalingSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_string(self).map_err(|_| fmt::Error)?;
        f.write_str(&s)
    }
}

impl FromStr for ScalingSeq {
    type Err = LabError;

    /// Parses `"tag k=v ..."`, e.g. `"exp_pow a=1.5"`, `"log"`,
    /// `"power_of_w a=0.25"` (ratio form) or `"reciprocal factorial"`.
    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec.starts_with('{') {
            return serde_json::from_str(spec).map_err(|e| LabError::parse(e.to_string()));
        }
        if let Some(rest) = spec.strip_prefix("reciprocal ") {
            return Ok(ScalingSeq::reciprocal(rest.parse()?));
        }
        let (tag, p) = text::parse_kv(spec)?;
        let get = |key: &str| -> Result<&String> {
            p.get(key)
                .ok_or_else(|| LabError::parse(format!("family {tag:?} needs parameter {key:?}")))
        };
        Ok(match tag.as_str() {
            "constant" | "const" => ScalingSeq::Constant {
                c: text::parse_complex(get("c")?)?,
            },
            "log" => ScalingSeq::LogPow { k: 1.0 },
            "log_pow" => ScalingSeq::LogPow {
                k: text::parse_real(get("k")?)?,
            },
            "log_log" => ScalingSeq::LogLog,
            "rational" | "rational_poly" => ScalingSeq::RationalPoly {
                p: text::parse_complex_list(get("p")?)?,
                q: match p.get("q") {
                    Some(q) => text::parse_complex_list(q)?,
                    None => vec![Complex64::new(1.0, 0.0)],
                },
            },
            "exp" => ScalingSeq::ExpPow { a: 1.0 },
            "exp_pow" => ScalingSeq::ExpPow {
                a: text::parse_real(get("a")?)?,
            },
            "exp_over_log" => ScalingSeq::ExpOverLog,
            "exp_over_log_log" => ScalingSeq::ExpOverLogLog,
            "factorial" => ScalingSeq::Factorial,
            "geom_even_odd" => ScalingSeq::GeomEvenOdd,
            "dyadic_tower" => ScalingSeq::DyadicTower,
            "power_of_w" => match (p.get("w"), p.get("a")) {
                (Some(w), _) => ScalingSeq::PowerOfW {
                    w: text::parse_complex(w)?,
                },
                (None, Some(a)) => ScalingSeq::power_of_w_from_ratio(text::parse_complex(a)?),
                _ => return Err(LabError::parse("power_of_w needs w= or a=")),
            },
            "geom_inverse" => ScalingSeq::GeomInverse {
                a: text::parse_complex(get("a")?)?,
            },
            "table" => ScalingSeq::Table {
                values: text::parse_complex_list(get("values")?)?
                    .into_iter()
                    .map(LogScalar::from_complex)
                    .collect(),
            },
            other => return Err(LabError::parse(format!("unknown sequence family {other:?}"))),
        })
    }
}

/// Extended-real limit of `|lambda_n| / |lambda_{n+tau}|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Limit {
    Zero,
    Finite(f64),
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "limit", rename_all = "snake_case")]
pub enum Verdict {
    Good,
    Bad(Limit),
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioVerdict {
    pub verdict: Verdict,
    pub tau: u64,
    /// Inclusive window of `n` over which ratios were tested.
    pub window: (u64, u64),
    pub samples: u64,
    pub min_log_ratio: f64,
    pub max_log_ratio: f64,
    /// `ln(|lambda_n| / |lambda_{n+tau}|)` for the last few tested `n`.
    pub tail_log_ratios: Vec<f64>,
}

impl RatioVerdict {
    pub fn tail_ratios(&self) -> Vec<f64> {
        self.tail_log_ratios.iter().map(|l| l.exp()).collect()
    }
}

/// Classifies `seq` by the ratios `r_n = |lambda_n| / |lambda_{n+tau}|` over the
/// window `[horizon/2, horizon]`.
///
/// `Good` needs `|r_n - 1| <= tol` everywhere in the window. `Bad(a)` needs all
/// ratios within `tol` of a common `a != 1`; `a = 0` (resp. infinity) is reported
/// when every ratio is below `tol` (resp. above `1/tol`) and the log-ratios are
/// still moving outward across the window. Anything else is `Inconclusive`.
pub fn ratio_classify(seq: &ScalingSeq, tau: u64, horizon: u64, tol: f64) -> Result<RatioVerdict> {
    ratio_classify_on(seq, tau, horizon, tol, |_| true)
}

/// [`ratio_classify`] restricted to the `n` accepted by `keep`.
pub fn ratio_classify_on<F>(
    seq: &ScalingSeq,
    tau: u64,
    horizon: u64,
    tol: f64,
    keep: F,
) -> Result<RatioVerdict>
where
    F: Fn(u64) -> bool,
{
    if tau == 0 {
        return Err(LabError::arg("tau must be positive"));
    }
    if !(tol > 0.0) {
        return Err(LabError::arg("tol must be positive"));
    }
    if horizon < 100 * tau {
        return Err(LabError::pre(format!(
            "horizon {horizon} must be at least 100*tau = {}",
            100 * tau
        )));
    }
    let start = (horizon / 2).max(seq.min_index());
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut first: Option<f64> = None;
    let mut last = 0.0;
    let mut samples = 0u64;
    let mut tail = std::collections::VecDeque::with_capacity(8);
    let good_lo = (-tol).ln_1p();
    let good_hi = tol.ln_1p();
    let mut all_good = true;

    for n in start..=horizon {
        if !keep(n) {
            continue;
        }
        let a = seq.eval_log(n)?;
        let b = seq.eval_log(n + tau)?;
        let l = match (a.is_zero(), b.is_zero()) {
            (true, true) => 0.0,
            (true, false) => f64::NEG_INFINITY,
            (false, true) => f64::INFINITY,
            (false, false) => a.log_mag() - b.log_mag(),
        };
        samples += 1;
        lo = lo.min(l);
        hi = hi.max(l);
        first.get_or_insert(l);
        last = l;
        all_good &= l >= good_lo && l <= good_hi;
        if tail.len() == 8 {
            tail.pop_front();
        }
        tail.push_back(l);
    }

    if samples == 0 {
        return Err(LabError::pre("no admissible n in the test window"));
    }
    let first = first.unwrap_or(0.0);
    let ln_tol = tol.ln();
    let drift = 1e-9 * first.abs().max(1.0);

    let verdict = if all_good {
        Verdict::Good
    } else if last <= ln_tol && last < first - drift {
        Verdict::Bad(Limit::Zero)
    } else if last >= -ln_tol && last > first + drift {
        Verdict::Bad(Limit::Infinite)
    } else if hi < 700.0 && lo > -700.0 {
        let (rlo, rhi) = (lo.exp(), hi.exp());
        let mid = 0.5 * (rlo + rhi);
        if 0.5 * (rhi - rlo) <= tol && (mid - 1.0).abs() > tol {
            Verdict::Bad(Limit::Finite(mid))
        } else {
            Verdict::Inconclusive
        }
    } else {
        Verdict::Inconclusive
    };

    Ok(RatioVerdict {
        verdict,
        tau,
        window: (start, horizon),
        samples,
        min_log_ratio: lo,
        max_log_ratio: hi,
        tail_log_ratios: tail.into_iter().collect(),
    })
}
