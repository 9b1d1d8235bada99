//! Per-subcommand JSON configuration. Unknown keys are rejected everywhere.

use rbment::rbm::{RbmParams, DEFAULT_MAX_SPINS};
use rbment::Result;
use serde::{Deserialize, Serialize};

/// A weight scale that may be `"inf"` (the `v → ∞` limit of the analytic models).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scale {
    Value(f64),
    Named(String),
}

impl Scale {
    pub fn value(&self) -> std::result::Result<f64, String> {
        match self {
            Scale::Value(x) => Ok(*x),
            Scale::Named(s) if matches!(s.as_str(), "inf" | "infinity") => Ok(f64::INFINITY),
            Scale::Named(s) => Err(format!(
                "unrecognized scale {s:?} (expected a number or \"inf\")"
            )),
        }
    }
}

fn default_max_spins() -> usize {
    DEFAULT_MAX_SPINS
}

/// A single ensemble point; exactly one of `m` and `lambda`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub u: f64,
    pub v: f64,
    #[serde(default = "default_max_spins")]
    pub max_spins: usize,
}

impl PointSpec {
    pub fn params(&self) -> Result<RbmParams> {
        match (self.m, self.lambda) {
            (Some(m), None) => RbmParams::new(self.n, m, self.u, self.v),
            (None, Some(l)) => RbmParams::from_lambda(self.n, l, self.u, self.v),
            _ => Err(rbment::Error::InvalidParameters(
                "give exactly one of m and lambda".into(),
            )),
        }
    }
}

fn half() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseDiagramConfig {
    pub u: Vec<f64>,
    pub v: Vec<Scale>,
    pub lambda: Vec<f64>,
    /// Subregion fraction for the coupled model.
    #[serde(default = "half")]
    pub a: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_step: Option<f64>,
}

fn default_points() -> usize {
    41
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticPage {
    pub u: f64,
    pub v: Scale,
    #[serde(default = "default_points")]
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericPage {
    pub n: Vec<usize>,
    pub u: f64,
    pub v: f64,
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default)]
    pub keep_raw: bool,
    #[serde(default = "default_max_spins")]
    pub max_spins: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PageCurveConfig {
    pub lambda: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analytic: Option<AnalyticPage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric: Option<NumericPage>,
    #[serde(default)]
    pub seed: u64,
}

fn default_bins() -> usize {
    40
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub ensemble: PointSpec,
    pub samples: usize,
    /// `|A|`, default `⌊N/2⌋`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subregion: Option<usize>,
    #[serde(default = "default_bins")]
    pub bins: usize,
    #[serde(default)]
    pub seed: u64,
}

fn plus() -> i8 {
    1
}

fn default_step() -> f64 {
    0.25
}

fn default_goe() -> usize {
    100_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelStatsConfig {
    pub ensemble: PointSpec,
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subregion: Option<usize>,
    /// Spin-flip sector, `+1` or `-1`.
    #[serde(default = "plus")]
    pub sector: i8,
    #[serde(default = "half")]
    pub half_width: f64,
    #[serde(default = "default_step")]
    pub window_step: f64,
    #[serde(default = "default_goe")]
    pub goe_samples: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericFractal {
    pub n: Vec<usize>,
    pub lambda: Vec<f64>,
    pub u: f64,
    pub v: f64,
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FractalConfig {
    pub q: Vec<u32>,
    pub lambda: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric: Option<NumericFractal>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignCheckConfig {
    pub ensemble: PointSpec,
    pub samples: usize,
    #[serde(default)]
    pub haar_control: bool,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormFluctConfig {
    pub n: Vec<usize>,
    pub lambda: Vec<f64>,
    pub u: f64,
    pub v: f64,
    pub samples: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(default)]
    pub seed: u64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_parsing() {
        let v: Vec<Scale> = serde_json::from_str(r#"[1.5, "inf"]"#).unwrap();
        assert_eq!(v[0].value().unwrap(), 1.5);
        assert_eq!(v[1].value().unwrap(), f64::INFINITY);
        assert!(Scale::Named("big".into()).value().is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = r#"{"ensemble": {"n": 4, "m": 2, "u": 0, "v": 1, "extra": 1}, "samples": 2}"#;
        assert!(serde_json::from_str::<DesignCheckConfig>(bad).is_err());
        let bad = r#"{"ensemble": {"n": 4, "m": 2, "u": 0, "v": 1}, "samples": 2, "sed": 3}"#;
        assert!(serde_json::from_str::<DesignCheckConfig>(bad).is_err());
    }

    #[test]
    fn point_needs_one_hidden_spec() {
        let p: PointSpec =
            serde_json::from_str(r#"{"n": 4, "m": 2, "lambda": 0.5, "u": 0, "v": 1}"#).unwrap();
        assert!(p.params().is_err());
        let p: PointSpec =
            serde_json::from_str(r#"{"n": 10, "lambda": 0.75, "u": 0, "v": 1}"#).unwrap();
        assert_eq!(p.params().unwrap().n_hidden, 8);
    }

    #[test]
    fn shipped_configs_deserialize() {
        macro_rules! check {
            ($t:ty, $name:literal) => {
                for text in [
                    include_str!(concat!("../../../configs/ci/", $name, ".json")),
                    include_str!(concat!("../../../configs/full/", $name, ".json")),
                ] {
                    serde_json::from_str::<$t>(text).expect($name);
                }
            };
        }
        check!(PhaseDiagramConfig, "phase-diagram");
        check!(PageCurveConfig, "page-curve");
        check!(SpectrumConfig, "spectrum");
        check!(LevelStatsConfig, "level-stats");
        check!(FractalConfig, "fractal");
        check!(DesignCheckConfig, "design-check");
        check!(NormFluctConfig, "norm-fluct");
    }
}
