//! TOML experiment configs.
//!
//! ```toml
//! scenario = "E6"
//! workers = 4
//!
//! [operator]
//! side = "unilateral"
//! weights = "unweighted"
//! premultiplier = "2"
//!
//! [[targets]]
//! vector = "e(1)"
//! eps = 0.001
//!
//! [horizons]
//! n = 100000
//!
//! [params]
//! gap = 16
//! m = [3, 4, 5]
//! ```
//!
//! Every field except `scenario` has a per-scenario default.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::sequence::ScalingSeq;
use crate::shift::{ShiftOp, WeightSeq};
use crate::text;
use crate::vector::{parse_vector, CoefVec, Side};

/// Largest accepted horizon. Larger runs exit with the resource-cap code.
pub const MAX_HORIZON: u64 = 50_000_000;
pub const MAX_WORKERS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scenario {
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
    E7,
}

impl Scenario {
    pub const ALL: [Scenario; 7] = [
        Scenario::E1,
        Scenario::E2,
        Scenario::E3,
        Scenario::E4,
        Scenario::E5,
        Scenario::E6,
        Scenario::E7,
    ];

    pub fn title(self) -> &'static str {
        match self {
            Scenario::E1 => "geometric bad sequence",
            Scenario::E2 => "factorial bad sequence",
            Scenario::E3 => "even/odd blocks",
            Scenario::E4 => "step bilateral shift",
            Scenario::E5 => "sqrt-ratio shift",
            Scenario::E6 => "progressions and multiple recurrence",
            Scenario::E7 => "Hardy adjoint symbols",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Scenario {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| LabError::parse(format!("unknown scenario {s:?} (expected E1..E7)")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    pub side: Side,
    #[serde(default = "unweighted")]
    pub weights: String,
    /// Complex literal such as `"2"` or `"[0, 1]"`.
    #[serde(default)]
    pub premultiplier: Option<String>,
}

fn unweighted() -> String {
    "unweighted".into()
}

impl OperatorSpec {
    pub fn build(&self) -> Result<ShiftOp> {
        let w: WeightSeq = self.weights.parse()?;
        let p = match &self.premultiplier {
            Some(s) => text::parse_complex(s)?,
            None => Complex64::new(1.0, 0.0),
        };
        ShiftOp::with_premultiplier(self.side, w, p)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    pub vector: String,
    pub eps: f64,
}

impl TargetSpec {
    pub fn parse(&self, side: Side) -> Result<(CoefVec, f64)> {
        Ok((parse_vector(side, &self.vector)?, self.eps))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Horizons {
    pub n: Option<u64>,
    pub k: Option<u64>,
    pub n0: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Ratio-classifier tolerance.
    pub ratio: Option<f64>,
    /// Shift-criterion or recurrence radius.
    pub eps: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Ratio `a` of the geometric family (E1).
    pub a: Option<String>,
    pub gap: Option<u64>,
    pub m: Option<Vec<u64>>,
    pub tau: Option<u64>,
    pub q: Option<u64>,
    /// Radius of the multiple-recurrence ball (E6).
    pub mr_eps: Option<f64>,
    pub series_cap: Option<f64>,
    /// Coefficient lists (E7).
    pub symbols: Option<Vec<String>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub operator: Option<OperatorSpec>,
    #[serde(default)]
    pub scaling: Option<String>,
    #[serde(default)]
    pub targets: Vec<TargetSpec>,
    #[serde(default)]
    pub horizons: Horizons,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub output: Output,
}

impl ExperimentConfig {
    /// A config with every optional field left to the scenario default.
    pub fn new(scenario: Scenario) -> Self {
        ExperimentConfig {
            scenario,
            workers: None,
            operator: None,
            scaling: None,
            targets: Vec::new(),
            horizons: Horizons::default(),
            tolerances: Tolerances::default(),
            params: Params::default(),
            output: Output::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| LabError::parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::parse(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| LabError::parse(e.to_string()))
    }

    /// Schema checks that do not need the scenario to run.
    pub fn validate(&self) -> Result<()> {
        for h in [self.horizons.n, self.horizons.k, self.horizons.n0].into_iter().flatten() {
            if h == 0 {
                return Err(LabError::arg("horizons must be positive"));
            }
            if h > MAX_HORIZON {
                return Err(LabError::ResourceCap(format!("horizon {h} exceeds {MAX_HORIZON}")));
            }
        }
        if let Some(w) = self.workers {
            if w == 0 || w > MAX_WORKERS {
                return Err(LabError::arg(format!("workers must lie in [1, {MAX_WORKERS}]")));
            }
        }
        for t in &self.targets {
            if !(t.eps > 0.0) {
                return Err(LabError::arg(format!("target radius must be positive, got {}", t.eps)));
            }
        }
        for tol in [self.tolerances.ratio, self.tolerances.eps, self.params.mr_eps, self.params.series_cap]
            .into_iter()
            .flatten()
        {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(LabError::arg(format!("tolerances must be positive and finite, got {tol}")));
            }
        }
        if let Some(op) = &self.operator {
            op.build()?;
        }
        if let Some(s) = &self.scaling {
            s.parse::<ScalingSeq>()?;
        }
        if let Some(a) = &self.params.a {
            text::parse_complex(a)?;
        }
        Ok(())
    }

    pub(crate) fn operator_or(&self, default: ShiftOp) -> Result<ShiftOp> {
        self.operator.as_ref().map_or(Ok(default), |o| o.build())
    }

    pub(crate) fn scaling_or(&self, default: ScalingSeq) -> Result<ScalingSeq> {
        self.scaling.as_ref().map_or(Ok(default), |s| s.parse())
    }

    pub(crate) fn targets_or(&self, side: Side, default: &[(&str, f64)]) -> Result<Vec<(CoefVec, f64)>> {
        if self.targets.is_empty() {
            default.iter().map(|&(v, e)| Ok((parse_vector(side, v)?, e))).collect()
        } else {
            self.targets.iter().map(|t| t.parse(side)).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_full_config() {
        let cfg = ExperimentConfig::from_toml(
            r#"
scenario = "E6"
workers = 2

[operator]
side = "unilateral"
premultiplier = "2"

[[targets]]
vector = "e(1)"
eps = 0.001

[horizons]
n = 5000

[params]
m = [3]
"#,
        )
        .unwrap();
        assert_eq!(cfg.scenario, Scenario::E6);
        assert_eq!(cfg.horizons.n, Some(5000));
        let op = cfg.operator.as_ref().unwrap().build().unwrap();
        assert_eq!(op.premultiplier, Complex64::new(2.0, 0.0));
        let again = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(ExperimentConfig::from_toml("scenario = \"E9\""), Err(LabError::Parse(_))));
        assert!(matches!(
            ExperimentConfig::from_toml("scenario = \"E1\"\nbogus = 1"),
            Err(LabError::Parse(_))
        ));
        assert!(matches!(
            ExperimentConfig::from_toml("scenario = \"E1\"\n[horizons]\nn = 100000000000"),
            Err(LabError::ResourceCap(_))
        ));
        assert!(ExperimentConfig::from_toml("scenario = \"E2\"\nscaling = \"nope\"").is_err());
        assert_eq!("e4".parse::<Scenario>().unwrap(), Scenario::E4);
    }
}
