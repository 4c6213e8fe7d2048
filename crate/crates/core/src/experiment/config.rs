//! TOML sweep configuration.
//!
//! ```toml
//! name = "example"
//! observables = ["gain:optical", "squeezing:mech", "stability"]
//!
//! [base]
//! c0 = 100.0
//! xi_m = { ratio = 0.5 }
//! kappa = 1e4
//! gamma_d = 1.0
//! n_m = 100.0
//!
//! [axis]
//! param = "c1"
//! start = 1.0
//! stop = 1e4
//! points = 50
//! scale = "log"
//!
//! [[series]]
//! label = "off"
//! xi_m = 0.0
//! ```

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linear_response::Mode;
use crate::params::{derive_dimensionless, ParamError, PhysicalParams};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(#[from] toml::de::Error),
    #[error("schema violation at `{key}`: {reason}")]
    Schema { key: String, reason: String },
    #[error(transparent)]
    Param(#[from] ParamError),
}

fn schema(key: impl Into<String>, reason: impl Into<String>) -> ConfigError {
    ConfigError::Schema {
        key: key.into(),
        reason: reason.into(),
    }
}

/// A modulation amplitude: raw, relative to its stability ceiling, or one of
/// the named large-drive operating points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum XiSpec {
    Value(f64),
    Ratio(RatioSpec),
    Preset(PresetSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatioSpec {
    pub ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresetSpec {
    pub preset: XiPreset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XiPreset {
    /// ξ_m = C₀/(1−C₁) − 1, where η_a = 2.
    CavitySq,
    /// ξ_m = 2 − ξ_m_max (at ξ_d = 0).
    MechCaseI,
    /// ξ_d = (C₁+1−C₀)/(C₀−1).
    MechCaseIi,
}

impl Default for XiSpec {
    fn default() -> Self {
        XiSpec::Value(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseConfig {
    #[serde(default)]
    pub c0: f64,
    #[serde(default)]
    pub c1: f64,
    #[serde(default)]
    pub xi_m: XiSpec,
    #[serde(default)]
    pub xi_d: XiSpec,
    pub kappa: f64,
    pub gamma_d: f64,
    #[serde(default)]
    pub n_a: f64,
    #[serde(default)]
    pub n_m: f64,
    #[serde(default)]
    pub n_d: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesConfig {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_m: Option<XiSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_d: Option<XiSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_d: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_d: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisParam {
    C0,
    C1,
    XiM,
    XiD,
    XiMRatio,
    XiDRatio,
    Kappa,
    GammaD,
    NA,
    NM,
    ND,
}

impl AxisParam {
    pub fn name(self) -> &'static str {
        match self {
            AxisParam::C0 => "c0",
            AxisParam::C1 => "c1",
            AxisParam::XiM => "xi_m",
            AxisParam::XiD => "xi_d",
            AxisParam::XiMRatio => "xi_m_ratio",
            AxisParam::XiDRatio => "xi_d_ratio",
            AxisParam::Kappa => "kappa",
            AxisParam::GammaD => "gamma_d",
            AxisParam::NA => "n_a",
            AxisParam::NM => "n_m",
            AxisParam::ND => "n_d",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        if n == 1 {
            return vec![self.start];
        }
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                if i == n - 1 {
                    return self.stop;
                }
                match self.scale {
                    Scale::Linear => self.start + t * (self.stop - self.start),
                    Scale::Log => {
                        let (a, b) = (self.start.log10(), self.stop.log10());
                        10f64.powf(a + t * (b - a))
                    }
                }
            })
            .collect()
    }

    fn validate(&self, key: &str) -> Result<(), ConfigError> {
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(schema(key, "range bounds must be finite"));
        }
        if self.scale == Scale::Log && (self.start <= 0.0 || self.stop <= 0.0) {
            return Err(schema(key, "log scale needs positive bounds"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub param: AxisParam,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl AxisConfig {
    pub fn range(&self) -> Range {
        Range {
            start: self.start,
            stop: self.stop,
            points: self.points,
            scale: self.scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FrequencyConfig {
    Single { omega: f64 },
    Grid(Range),
}

impl Default for FrequencyConfig {
    fn default() -> Self {
        FrequencyConfig::Single { omega: 0.0 }
    }
}

impl FrequencyConfig {
    pub fn values(&self) -> Vec<f64> {
        match self {
            FrequencyConfig::Single { omega } => vec![*omega],
            FrequencyConfig::Grid(r) => r.values(),
        }
    }

    pub fn is_grid(&self) -> bool {
        matches!(self, FrequencyConfig::Grid(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableKind {
    Gain,
    AddedNoise,
    AmplifiedSpectrum,
    Squeezing,
    Purity,
    CrossCorrelation,
    Bandwidth,
    Stability,
}

/// One requested observable, written `kind:mode` (`bandwidth` and
/// `stability` take no mode).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Observable {
    pub kind: ObservableKind,
    pub mode: Option<Mode>,
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ObservableKind::Gain => "gain",
            ObservableKind::AddedNoise => "added_noise",
            ObservableKind::AmplifiedSpectrum => "amplified_spectrum",
            ObservableKind::Squeezing => "squeezing",
            ObservableKind::Purity => "purity",
            ObservableKind::CrossCorrelation => "cross_correlation",
            ObservableKind::Bandwidth => "bandwidth",
            ObservableKind::Stability => "stability",
        };
        match self.mode {
            Some(m) => write!(f, "{kind}:{}", m.name()),
            None => f.write_str(kind),
        }
    }
}

impl std::str::FromStr for Observable {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind_str, mode_str) = match s.split_once(':') {
            Some((k, m)) => (k, Some(m)),
            None => (s, None),
        };
        let kind = match kind_str {
            "gain" => ObservableKind::Gain,
            "added_noise" => ObservableKind::AddedNoise,
            "amplified_spectrum" => ObservableKind::AmplifiedSpectrum,
            "squeezing" => ObservableKind::Squeezing,
            "purity" => ObservableKind::Purity,
            "cross_correlation" => ObservableKind::CrossCorrelation,
            "bandwidth" => ObservableKind::Bandwidth,
            "stability" => ObservableKind::Stability,
            other => return Err(format!("unknown observable kind `{other}`")),
        };
        let mode = match mode_str {
            None => None,
            Some("optical") => Some(Mode::Optical),
            Some("mech") => Some(Mode::Mechanical),
            Some("bog") => Some(Mode::Bogoliubov),
            Some(other) => return Err(format!("unknown mode `{other}` (optical, mech, bog)")),
        };
        match (kind, mode) {
            (ObservableKind::Stability, Some(_)) => Err("`stability` takes no mode".into()),
            (ObservableKind::Bandwidth, Some(m)) if m != Mode::Optical => {
                Err("`bandwidth` is only defined for the optical mode".into())
            }
            (ObservableKind::Bandwidth, _) => Ok(Observable {
                kind,
                mode: Some(Mode::Optical),
            }),
            (ObservableKind::Stability, None) => Ok(Observable { kind, mode: None }),
            (_, None) => Err(format!("`{kind_str}` needs a mode, e.g. `{kind_str}:optical`")),
            (_, Some(_)) => Ok(Observable { kind, mode }),
        }
    }
}

impl Serialize for Observable {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Observable {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub name: String,
    #[serde(default = "default_schema_version")]
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<BaseConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub physical: Option<PhysicalParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<AxisConfig>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub series: Vec<SeriesConfig>,
    pub observables: Vec<Observable>,
    #[serde(default)]
    pub frequency: FrequencyConfig,
}

fn default_schema_version() -> u32 {
    SCHEMA_VERSION
}

fn check_xi(key: &str, spec: &XiSpec, mech: bool) -> Result<(), ConfigError> {
    match spec {
        XiSpec::Value(v) if !v.is_finite() || *v < 0.0 => {
            Err(schema(key, "must be finite and non-negative"))
        }
        XiSpec::Ratio(r) if !r.ratio.is_finite() || r.ratio < 0.0 => {
            Err(schema(key, "ratio must be finite and non-negative"))
        }
        XiSpec::Preset(p) => {
            let ok = match p.preset {
                XiPreset::CavitySq | XiPreset::MechCaseI => mech,
                XiPreset::MechCaseIi => !mech,
            };
            if ok {
                Ok(())
            } else {
                Err(schema(key, "preset does not apply to this modulation"))
            }
        }
        _ => Ok(()),
    }
}

fn check_number(key: &str, v: f64, strictly_positive: bool) -> Result<(), ConfigError> {
    if !v.is_finite() || v < 0.0 || (strictly_positive && v == 0.0) {
        let what = if strictly_positive { "positive" } else { "non-negative" };
        return Err(schema(key, format!("must be finite and {what} (got {v})")));
    }
    Ok(())
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(schema(
                "schema_version",
                format!("unsupported version {} (expected {SCHEMA_VERSION})", self.schema_version),
            ));
        }
        match (&self.base, &self.physical) {
            (Some(_), Some(_)) => return Err(schema("base", "give either [base] or [physical], not both")),
            (None, None) => return Err(schema("base", "missing [base] or [physical] table")),
            _ => {}
        }
        if let Some(b) = &self.base {
            check_number("base.c0", b.c0, false)?;
            check_number("base.c1", b.c1, false)?;
            check_number("base.kappa", b.kappa, true)?;
            check_number("base.gamma_d", b.gamma_d, true)?;
            check_number("base.n_a", b.n_a, false)?;
            check_number("base.n_m", b.n_m, false)?;
            check_number("base.n_d", b.n_d, false)?;
            check_xi("base.xi_m", &b.xi_m, true)?;
            check_xi("base.xi_d", &b.xi_d, false)?;
        }
        if let Some(p) = &self.physical {
            p.validate().map_err(|e| match e {
                ParamError::Invalid { field, reason, value } => {
                    schema(format!("physical.{field}"), format!("{reason} (got {value})"))
                }
                other => ConfigError::Param(other),
            })?;
        }
        if let Some(axis) = &self.axis {
            axis.range().validate("axis")?;
            if axis.points < 2 {
                return Err(schema("axis.points", "need at least 2 points"));
            }
        }
        if let FrequencyConfig::Grid(r) = &self.frequency {
            r.validate("frequency")?;
            if r.points < 2 {
                return Err(schema("frequency.points", "need at least 2 points"));
            }
        }
        if self.observables.is_empty() {
            return Err(schema("observables", "must list at least one observable"));
        }
        let mut labels = std::collections::BTreeSet::new();
        for (i, s) in self.series.iter().enumerate() {
            let key = |f: &str| format!("series[{i}].{f}");
            if s.label.is_empty() || !labels.insert(s.label.as_str()) {
                return Err(schema(key("label"), "labels must be non-empty and unique"));
            }
            for (f, v, pos) in [
                ("c0", s.c0, false),
                ("c1", s.c1, false),
                ("kappa", s.kappa, true),
                ("gamma_d", s.gamma_d, true),
                ("n_a", s.n_a, false),
                ("n_m", s.n_m, false),
                ("n_d", s.n_d, false),
            ] {
                if let Some(v) = v {
                    check_number(&key(f), v, pos)?;
                }
            }
            if let Some(x) = &s.xi_m {
                check_xi(&key("xi_m"), x, true)?;
            }
            if let Some(x) = &s.xi_d {
                check_xi(&key("xi_d"), x, false)?;
            }
        }
        Ok(())
    }

    /// The dimensionless base every point starts from.
    pub fn resolved_base(&self) -> Result<BaseConfig, ConfigError> {
        if let Some(b) = &self.base {
            return Ok(b.clone());
        }
        let p = self
            .physical
            .as_ref()
            .ok_or_else(|| schema("base", "missing [base] or [physical] table"))?;
        let d = derive_dimensionless(p)?;
        Ok(BaseConfig {
            c0: d.c0,
            c1: d.c1,
            xi_m: XiSpec::Value(d.xi_m),
            xi_d: XiSpec::Value(d.xi_d),
            kappa: d.kappa,
            gamma_d: d.gamma_d,
            n_a: d.n_a,
            n_m: d.n_m,
            n_d: d.n_d,
        })
    }

    pub fn point_count(&self) -> usize {
        self.axis.map_or(1, |a| a.points) * self.frequency.values().len()
    }
}

pub fn parse_config(text: &str) -> Result<SweepConfig, ConfigError> {
    let cfg: SweepConfig = toml::from_str(text)?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<SweepConfig, ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
name = "t"
observables = ["gain:optical"]
[base]
kappa = 100.0
gamma_d = 1.0
"#;

    #[test]
    fn minimal_config_parses_with_defaults() {
        let cfg = parse_config(MINIMAL).unwrap();
        let b = cfg.base.clone().unwrap();
        assert_eq!(b.c0, 0.0);
        assert_eq!(b.xi_m, XiSpec::Value(0.0));
        assert_eq!(cfg.frequency, FrequencyConfig::Single { omega: 0.0 });
        assert_eq!(cfg.point_count(), 1);
    }

    #[test]
    fn xi_spec_forms() {
        let text = MINIMAL.replace(
            "kappa = 100.0",
            "kappa = 100.0\nxi_m = { ratio = 0.5 }\nxi_d = { preset = \"mech_case_ii\" }",
        );
        let b = parse_config(&text).unwrap().base.unwrap();
        assert_eq!(b.xi_m, XiSpec::Ratio(RatioSpec { ratio: 0.5 }));
        assert_eq!(
            b.xi_d,
            XiSpec::Preset(PresetSpec {
                preset: XiPreset::MechCaseIi
            })
        );
        let wrong = MINIMAL.replace("kappa = 100.0", "kappa = 100.0\nxi_d = { preset = \"cavity_sq\" }");
        assert!(matches!(parse_config(&wrong), Err(ConfigError::Schema { .. })));
    }

    #[test]
    fn unknown_key_reports_location() {
        let text = MINIMAL.replace("gamma_d = 1.0", "gamma_d = 1.0\nbogus = 3");
        let err = parse_config(&text).unwrap_err().to_string();
        assert!(err.contains("bogus"), "{err}");
        assert!(err.contains("line"), "{err}");
    }

    #[test]
    fn empty_observables_rejected() {
        let text = MINIMAL.replace("[\"gain:optical\"]", "[]");
        match parse_config(&text) {
            Err(ConfigError::Schema { key, .. }) => assert_eq!(key, "observables"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_gamma_m_rejected() {
        let text = r#"
name = "p"
observables = ["stability"]
[physical]
kappa = 1.0
gamma_m = -1.0
gamma_d = 1.0
g_om = 0.1
g_atom = 0.0
lambda_m = 0.0
lambda_d = 0.0
n_a = 0.0
n_m = 0.0
n_d = 0.0
"#;
        match parse_config(text) {
            Err(ConfigError::Schema { key, .. }) => assert_eq!(key, "physical.gamma_m"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn observable_syntax() {
        assert_eq!(
            "bandwidth".parse::<Observable>().unwrap().mode,
            Some(Mode::Optical)
        );
        assert!("gain".parse::<Observable>().is_err());
        assert!("stability:mech".parse::<Observable>().is_err());
        assert!("bandwidth:mech".parse::<Observable>().is_err());
        let o: Observable = "purity:bog".parse().unwrap();
        assert_eq!(o.to_string(), "purity:bog");
    }

    #[test]
    fn ranges() {
        let r = Range {
            start: 1.0,
            stop: 1e4,
            points: 5,
            scale: Scale::Log,
        };
        let v = r.values();
        assert_eq!(v.len(), 5);
        assert_eq!(v[0], 1.0);
        assert_eq!(v[4], 1e4);
        assert!((v[2] - 100.0).abs() < 1e-10);
        let lin = Range {
            start: 0.0,
            stop: 0.999,
            points: 200,
            scale: Scale::Linear,
        };
        assert_eq!(lin.values()[199], 0.999);
    }

    #[test]
    fn single_point_axis_rejected() {
        let text = format!("{MINIMAL}[axis]\nparam = \"c0\"\nstart = 1.0\nstop = 2.0\npoints = 1\n");
        assert!(matches!(parse_config(&text), Err(ConfigError::Schema { .. })));
    }
}
