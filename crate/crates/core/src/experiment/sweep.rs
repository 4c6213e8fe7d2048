//! Sweep evaluation: expands a [`SweepConfig`] into points, resolves the
//! modulation specs per point and fills one cell per column.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::config::{AxisParam, BaseConfig, Observable, ObservableKind, SeriesConfig, SweepConfig, XiPreset, XiSpec, SCHEMA_VERSION};
use crate::amplifier::{
    added_noise_on_resonance, added_noise_spectrum, amplified_spectrum,
    amplified_spectrum_on_resonance, gain_db, gain_on_resonance, gain_spectrum, scattering_at,
    Tagged,
};
use crate::bandwidth::{fwhm_numeric, gain_bandwidth_analytic};
use crate::exec::{self, ExecMode};
use crate::linear_response::{build_drift, stability_eigen, Mode};
use crate::params::{collective_cooperativities, validate_stability_inputs, DimensionlessParams};
use crate::squeezer::{
    asymptotic_limits, cross_correlation_spectrum, purity, squeezing_db, squeezing_on_resonance,
    squeezing_spectrum,
};

/// Placeholder written where a number cannot be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sentinel {
    #[serde(rename = "inf")]
    Infinite,
    #[serde(rename = "-inf")]
    NegInfinite,
    #[serde(rename = "unstable")]
    Unstable,
    #[serde(rename = "pole")]
    Pole,
    #[serde(rename = "undefined")]
    Undefined,
    #[serde(rename = "invalid")]
    Invalid,
}

impl Sentinel {
    pub const ALL: [Sentinel; 6] = [
        Sentinel::Infinite,
        Sentinel::NegInfinite,
        Sentinel::Unstable,
        Sentinel::Pole,
        Sentinel::Undefined,
        Sentinel::Invalid,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Sentinel::Infinite => "inf",
            Sentinel::NegInfinite => "-inf",
            Sentinel::Unstable => "unstable",
            Sentinel::Pole => "pole",
            Sentinel::Undefined => "undefined",
            Sentinel::Invalid => "invalid",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Sentinel::ALL.into_iter().find(|x| x.as_str() == s)
    }
}

impl fmt::Display for Sentinel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Value(f64),
    Sentinel(Sentinel),
}

impl Cell {
    /// Never stores a non-finite number.
    pub fn from_f64(x: f64) -> Self {
        if x.is_nan() {
            Cell::Sentinel(Sentinel::Undefined)
        } else if x == f64::INFINITY {
            Cell::Sentinel(Sentinel::Infinite)
        } else if x == f64::NEG_INFINITY {
            Cell::Sentinel(Sentinel::NegInfinite)
        } else {
            Cell::Value(x)
        }
    }

    pub fn from_tagged(t: Tagged) -> Self {
        match t {
            Tagged::Finite(x) => Cell::from_f64(x),
            Tagged::Infinite => Cell::Sentinel(Sentinel::Infinite),
            Tagged::Undefined => Cell::Sentinel(Sentinel::Undefined),
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Cell::Value(x) => Some(x),
            Cell::Sentinel(_) => None,
        }
    }

    pub fn sentinel(self) -> Option<Sentinel> {
        match self {
            Cell::Sentinel(s) => Some(s),
            Cell::Value(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub squeezing_db: String,
    pub gain_db: String,
    pub units: String,
    pub spectra: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Self {
            squeezing_db: "-10*log10(2*S)".into(),
            gain_db: "10*log10(G)".into(),
            units: "rates and frequencies in units of gamma_m".into(),
            spectra: "symmetrized, vacuum = 1/2".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub generator: String,
    pub conventions: Conventions,
    pub sentinels: Vec<Sentinel>,
    pub config: SweepConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub schema_version: u32,
    pub name: String,
    pub metadata: Metadata,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl SweepResult {
    pub fn column(&self, name: &str) -> Option<Vec<Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// Unresolved parameters of one series at one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSpec {
    pub c0: f64,
    pub c1: f64,
    pub xi_m: XiSpec,
    pub xi_d: XiSpec,
    pub kappa: f64,
    pub gamma_d: f64,
    pub n_a: f64,
    pub n_m: f64,
    pub n_d: f64,
}

impl PointSpec {
    fn from_base(b: &BaseConfig) -> Self {
        Self {
            c0: b.c0,
            c1: b.c1,
            xi_m: b.xi_m.clone(),
            xi_d: b.xi_d.clone(),
            kappa: b.kappa,
            gamma_d: b.gamma_d,
            n_a: b.n_a,
            n_m: b.n_m,
            n_d: b.n_d,
        }
    }

    fn apply_series(&mut self, s: &SeriesConfig) {
        macro_rules! over {
            ($($f:ident),*) => {$(if let Some(v) = &s.$f { self.$f = v.clone(); })*};
        }
        over!(c0, c1, xi_m, xi_d, kappa, gamma_d, n_a, n_m, n_d);
    }

    fn apply_axis(&mut self, param: AxisParam, v: f64) {
        match param {
            AxisParam::C0 => self.c0 = v,
            AxisParam::C1 => self.c1 = v,
            AxisParam::XiM => self.xi_m = XiSpec::Value(v),
            AxisParam::XiD => self.xi_d = XiSpec::Value(v),
            AxisParam::XiMRatio => self.xi_m = XiSpec::Ratio(super::config::RatioSpec { ratio: v }),
            AxisParam::XiDRatio => self.xi_d = XiSpec::Ratio(super::config::RatioSpec { ratio: v }),
            AxisParam::Kappa => self.kappa = v,
            AxisParam::GammaD => self.gamma_d = v,
            AxisParam::NA => self.n_a = v,
            AxisParam::NM => self.n_m = v,
            AxisParam::ND => self.n_d = v,
        }
    }

    /// Turns ratio and preset specs into raw ξ values. A ratio is taken
    /// against the ceiling evaluated at the other modulation's raw value, or
    /// with the other modulation off when both are ratios.
    pub fn resolve(&self) -> Result<DimensionlessParams, Sentinel> {
        let mut d = DimensionlessParams {
            c0: self.c0,
            c1: self.c1,
            xi_m: 0.0,
            xi_d: 0.0,
            kappa: self.kappa,
            gamma_d: self.gamma_d,
            n_a: self.n_a,
            n_m: self.n_m,
            n_d: self.n_d,
        };
        let raw = |s: &XiSpec| match s {
            XiSpec::Value(v) => Some(*v),
            _ => None,
        };
        let other_m = raw(&self.xi_d).unwrap_or(0.0);
        let other_d = raw(&self.xi_m).unwrap_or(0.0);
        let limits = asymptotic_limits(&d);
        let xi_m = match &self.xi_m {
            XiSpec::Value(v) => *v,
            XiSpec::Ratio(r) => {
                let b = collective_cooperativities(&d.with_xi(0.0, other_m))
                    .map_err(|_| Sentinel::Undefined)?;
                r.ratio * b.xi_m_max
            }
            XiSpec::Preset(p) => match p.preset {
                XiPreset::CavitySq => limits.cavity.xi_m,
                XiPreset::MechCaseI => limits.mech_case_i.xi_m,
                XiPreset::MechCaseIi => return Err(Sentinel::Invalid),
            },
        };
        let xi_d = match &self.xi_d {
            XiSpec::Value(v) => *v,
            XiSpec::Ratio(r) => {
                let b = collective_cooperativities(&d.with_xi(other_d, 0.0))
                    .map_err(|_| Sentinel::Undefined)?;
                r.ratio * b.xi_d_max
            }
            XiSpec::Preset(p) => match p.preset {
                XiPreset::MechCaseIi => limits.mech_case_ii.xi_d,
                _ => return Err(Sentinel::Invalid),
            },
        };
        d.xi_m = xi_m;
        d.xi_d = xi_d;
        if d.validate().is_err() {
            return Err(Sentinel::Invalid);
        }
        Ok(d)
    }
}

fn column_names(obs: &Observable) -> Vec<String> {
    let m = obs.mode.map(Mode::name).unwrap_or("");
    match obs.kind {
        ObservableKind::Gain => vec![format!("gain_{m}"), format!("gain_{m}_db")],
        ObservableKind::AddedNoise => vec![format!("added_noise_{m}")],
        ObservableKind::AmplifiedSpectrum => vec![format!("amplified_spectrum_{m}")],
        ObservableKind::Squeezing => vec![format!("squeezing_{m}"), format!("squeezing_{m}_db")],
        ObservableKind::Purity => vec![format!("n_eff_{m}")],
        ObservableKind::CrossCorrelation => vec![format!("cross_correlation_{m}")],
        ObservableKind::Bandwidth => vec!["bandwidth_analytic".into(), "bandwidth_numeric".into()],
        ObservableKind::Stability => vec!["max_re_eig".into(), "xi_m_margin".into()],
    }
}

fn fill(n: usize, s: Sentinel) -> Vec<Cell> {
    vec![Cell::Sentinel(s); n]
}

/// Evaluates one observable at a resolved, stable parameter point.
fn evaluate_stable(d: &DimensionlessParams, omega: f64, obs: &Observable) -> Vec<Cell> {
    let width = column_names(obs).len();
    let mode = obs.mode.unwrap_or(Mode::Optical);
    if obs.kind == ObservableKind::Bandwidth {
        let analytic = gain_bandwidth_analytic(d)
            .map(|e| Cell::from_f64(e.weak_coupling))
            .unwrap_or(Cell::Sentinel(Sentinel::Undefined));
        let numeric = fwhm_numeric(d, Mode::Optical)
            .map(Cell::from_f64)
            .unwrap_or(Cell::Sentinel(Sentinel::Undefined));
        return vec![analytic, numeric];
    }
    if omega == 0.0 {
        return match obs.kind {
            ObservableKind::Gain => {
                let g = gain_on_resonance(d).get(mode).gain();
                vec![Cell::from_tagged(g), Cell::from_tagged(g.map(gain_db))]
            }
            ObservableKind::AddedNoise => vec![Cell::from_tagged(added_noise_on_resonance(d).get(mode))],
            ObservableKind::AmplifiedSpectrum => {
                vec![Cell::from_tagged(amplified_spectrum_on_resonance(d).get(mode))]
            }
            ObservableKind::Squeezing => match squeezing_on_resonance(d) {
                Ok(r) => vec![Cell::from_f64(r.get(mode)), Cell::from_f64(squeezing_db(r.get(mode)))],
                Err(_) => fill(width, Sentinel::Undefined),
            },
            ObservableKind::Purity => {
                let sq = squeezing_on_resonance(d).map(|r| r.get(mode));
                let amp = amplified_spectrum_on_resonance(d).get(mode);
                match (sq, amp) {
                    (Ok(sq), Tagged::Finite(amp)) => match purity(sq, amp, 0.0, 0.0) {
                        Ok(n) => vec![Cell::from_f64(n)],
                        Err(_) => fill(1, Sentinel::Undefined),
                    },
                    (Ok(_), Tagged::Infinite) => fill(1, Sentinel::Infinite),
                    _ => fill(1, Sentinel::Undefined),
                }
            }
            ObservableKind::CrossCorrelation => spectral(d, omega, obs, mode),
            ObservableKind::Bandwidth | ObservableKind::Stability => unreachable!(),
        };
    }
    spectral(d, omega, obs, mode)
}

fn spectral(d: &DimensionlessParams, omega: f64, obs: &Observable, mode: Mode) -> Vec<Cell> {
    let width = column_names(obs).len();
    let s = match scattering_at(d, omega) {
        Ok(s) => s,
        Err(_) => return fill(width, Sentinel::Pole),
    };
    match obs.kind {
        ObservableKind::Gain => {
            let g = gain_spectrum(&s, mode);
            vec![Cell::from_f64(g), Cell::from_f64(gain_db(g))]
        }
        ObservableKind::AddedNoise => match added_noise_spectrum(&s, d, mode) {
            Ok(n) => vec![Cell::from_f64(n)],
            Err(_) => fill(1, Sentinel::Undefined),
        },
        ObservableKind::AmplifiedSpectrum => vec![Cell::from_f64(amplified_spectrum(&s, d, mode))],
        ObservableKind::Squeezing => {
            let sq = squeezing_spectrum(&s, d, mode);
            vec![Cell::from_f64(sq), Cell::from_f64(squeezing_db(sq))]
        }
        ObservableKind::Purity => {
            let xp = cross_correlation_spectrum(&s, mode);
            match purity(squeezing_spectrum(&s, d, mode), amplified_spectrum(&s, d, mode), xp, xp) {
                Ok(n) => vec![Cell::from_f64(n)],
                Err(_) => fill(1, Sentinel::Undefined),
            }
        }
        ObservableKind::CrossCorrelation => vec![Cell::from_f64(cross_correlation_spectrum(&s, mode))],
        ObservableKind::Bandwidth | ObservableKind::Stability => unreachable!(),
    }
}

/// Cells for every observable of one series at one point.
pub fn evaluate_point(spec: &PointSpec, omega: f64, observables: &[Observable]) -> Vec<Cell> {
    let widths: usize = observables.iter().map(|o| column_names(o).len()).sum();
    let d = match spec.resolve() {
        Ok(d) => d,
        Err(s) => return fill(widths, s),
    };
    let report = stability_eigen(&build_drift(&d));
    let mut out = Vec::with_capacity(widths);
    for obs in observables {
        if obs.kind == ObservableKind::Stability {
            let max_re = report
                .as_ref()
                .map(|r| Cell::from_f64(r.max_real_part))
                .unwrap_or(Cell::Sentinel(Sentinel::Undefined));
            let margin = validate_stability_inputs(&d, d.xi_m, d.xi_d).mech.margin;
            out.push(max_re);
            out.push(Cell::from_f64(margin));
            continue;
        }
        match &report {
            Ok(r) if r.hurwitz => out.extend(evaluate_stable(&d, omega, obs)),
            Ok(_) => out.extend(fill(column_names(obs).len(), Sentinel::Unstable)),
            Err(_) => out.extend(fill(column_names(obs).len(), Sentinel::Undefined)),
        }
    }
    out
}

/// Axis values (`None` when there is no axis), frequencies and the base.
pub(crate) type Layout = (Vec<Option<f64>>, Vec<f64>, BaseConfig);

/// Point layout shared by the sweep and the invariant checks.
pub(crate) fn expand(cfg: &SweepConfig) -> Result<Layout, super::ConfigError> {
    let axis: Vec<Option<f64>> = match &cfg.axis {
        Some(a) => a.range().values().into_iter().map(Some).collect(),
        None => vec![None],
    };
    Ok((axis, cfg.frequency.values(), cfg.resolved_base()?))
}

pub(crate) fn point_spec(
    cfg: &SweepConfig,
    base: &BaseConfig,
    series: Option<&SeriesConfig>,
    axis_value: Option<f64>,
) -> PointSpec {
    let mut spec = PointSpec::from_base(base);
    if let Some(s) = series {
        spec.apply_series(s);
    }
    if let (Some(a), Some(v)) = (&cfg.axis, axis_value) {
        spec.apply_axis(a.param, v);
    }
    spec
}

pub fn columns(cfg: &SweepConfig) -> Vec<String> {
    let mut cols = Vec::new();
    if let Some(a) = &cfg.axis {
        cols.push(a.param.name().to_string());
    }
    if cfg.frequency.is_grid() {
        cols.push("omega".to_string());
    }
    let obs_cols: Vec<String> = cfg.observables.iter().flat_map(column_names).collect();
    if cfg.series.is_empty() {
        cols.extend(obs_cols);
    } else {
        for s in &cfg.series {
            cols.extend(obs_cols.iter().map(|c| format!("{}/{c}", s.label)));
        }
    }
    cols
}

pub fn run_sweep(cfg: &SweepConfig, mode: ExecMode) -> Result<SweepResult, super::ConfigError> {
    cfg.validate()?;
    let (axis, omegas, base) = expand(cfg)?;
    let n_rows = axis.len() * omegas.len();
    let series: Vec<Option<&SeriesConfig>> = if cfg.series.is_empty() {
        vec![None]
    } else {
        cfg.series.iter().map(Some).collect()
    };

    let rows = exec::map_range(mode, n_rows, |r| {
        let (ai, wi) = (r / omegas.len(), r % omegas.len());
        let mut row = Vec::new();
        if let Some(v) = axis[ai] {
            row.push(Cell::Value(v));
        }
        if cfg.frequency.is_grid() {
            row.push(Cell::Value(omegas[wi]));
        }
        for s in &series {
            let spec = point_spec(cfg, &base, *s, axis[ai]);
            row.extend(evaluate_point(&spec, omegas[wi], &cfg.observables));
        }
        row
    });

    Ok(SweepResult {
        schema_version: SCHEMA_VERSION,
        name: cfg.name.clone(),
        metadata: Metadata {
            generator: concat!("bec-optomech ", env!("CARGO_PKG_VERSION")).to_string(),
            conventions: Conventions::default(),
            sentinels: Sentinel::ALL.to_vec(),
            config: cfg.clone(),
        },
        columns: columns(cfg),
        rows,
    })
}
