//! Internal-consistency checks over every point of a config: the two χ
//! routes agree, closed-form gains and squeezing match the spectral route,
//! occupations are non-negative, X-P correlations vanish and the steady-state
//! covariance is a physical state.

use serde::Serialize;

use super::config::{ConfigError, SeriesConfig, SweepConfig};
use super::sweep::{expand, point_spec};
use crate::amplifier::{gain_on_resonance, gain_spectrum, scattering_at, Tagged};
use crate::exec::{self, ExecMode};
use crate::linear_response::{
    build_drift, stability_eigen, steady_state_covariance, susceptibility_closed,
    susceptibility_numeric, Mode,
};
use crate::params::DimensionlessParams;
use crate::squeezer::{
    cross_correlation_spectrum, purity, squeezing_on_resonance, squeezing_spectrum,
};

const CHI_TOL: f64 = 1e-9;
const GAIN_TOL: f64 = 1e-9;
const SQUEEZE_TOL: f64 = 1e-10;
const N_EFF_FLOOR: f64 = -1e-9;
const XP_TOL: f64 = 1e-10;
const COV_TOL: f64 = 1e-9;

const NAMES: [&str; 6] = [
    "chi_closed_vs_numeric",
    "gain_closed_vs_spectral",
    "squeezing_closed_vs_spectral",
    "n_eff_non_negative",
    "xp_correlation_vanishes",
    "covariance_physical",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub points_checked: usize,
    pub failures: usize,
    /// Largest violation measure seen (error, or distance below the floor).
    pub worst: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub points: usize,
    pub unstable: usize,
    pub checks: Vec<CheckOutcome>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failures == 0)
    }
}

#[derive(Default, Clone, Copy)]
struct Tally {
    checked: usize,
    failures: usize,
    worst: f64,
}

impl Tally {
    fn record(&mut self, measure: f64, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
        }
        if measure.is_nan() || measure > self.worst {
            self.worst = measure;
        }
    }

    fn merge(&mut self, o: &Tally) {
        self.checked += o.checked;
        self.failures += o.failures;
        if o.worst.is_nan() || o.worst > self.worst {
            self.worst = o.worst;
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

struct PointTally {
    t: [Tally; 6],
    unstable: bool,
}

fn check_point(d: &DimensionlessParams, omegas: &[f64]) -> PointTally {
    let mut t = [Tally::default(); 6];
    let a = build_drift(d);

    for &w in omegas {
        if let (Ok(c), Ok(n)) = (susceptibility_closed(d, w), susceptibility_numeric(&a, w)) {
            let scale = n.entries.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
            let err = (c.entries - n.entries).iter().map(|z| z.norm()).fold(0.0, f64::max) / scale;
            t[0].record(err, err <= CHI_TOL);
        }
    }

    let stable = matches!(stability_eigen(&a), Ok(r) if r.hurwitz);
    if !stable {
        return PointTally { t, unstable: true };
    }

    if let Ok(s0) = scattering_at(d, 0.0) {
        let gains = gain_on_resonance(d);
        let sq = squeezing_on_resonance(d).ok();
        for mode in Mode::ALL {
            if let Tagged::Finite(g) = gains.get(mode).gain() {
                let err = rel(g, gain_spectrum(&s0, mode));
                t[1].record(err, err <= GAIN_TOL);
            }
            if let Some(sq) = &sq {
                let err = rel(sq.get(mode), squeezing_spectrum(&s0, d, mode));
                t[2].record(err, err <= SQUEEZE_TOL);
            }
        }
    }

    for &w in omegas {
        let Ok(s) = scattering_at(d, w) else { continue };
        for mode in Mode::ALL {
            let xp = cross_correlation_spectrum(&s, mode);
            let sxx = squeezing_spectrum(&s, d, mode);
            let spp = crate::amplifier::amplified_spectrum(&s, d, mode);
            match purity(sxx, spp, xp, xp) {
                Ok(n) => t[3].record((-n).max(0.0), n >= N_EFF_FLOOR),
                Err(_) => t[3].record(f64::NAN, false),
            }
            t[4].record(xp.abs(), xp.abs() < XP_TOL);
        }
    }

    match steady_state_covariance(&a, d) {
        Ok(v) => {
            let e = v.min_uncertainty_eigenvalue();
            t[5].record((-e).max(0.0), v.is_physical(COV_TOL));
        }
        Err(_) => t[5].record(f64::NAN, false),
    }
    PointTally { t, unstable: false }
}

/// Runs every check at every (axis, series) point of `cfg`, at the config's
/// frequencies plus ω = 0 for the closed-form comparisons.
pub fn check_config(cfg: &SweepConfig, mode: ExecMode) -> Result<CheckReport, ConfigError> {
    cfg.validate()?;
    let (axis, omegas, base) = expand(cfg)?;
    let series: Vec<Option<&SeriesConfig>> = if cfg.series.is_empty() {
        vec![None]
    } else {
        cfg.series.iter().map(Some).collect()
    };
    let n = axis.len() * series.len();
    let per_point = exec::map_range(mode, n, |k| {
        let spec = point_spec(cfg, &base, series[k % series.len()], axis[k / series.len()]);
        spec.resolve().ok().map(|d| check_point(&d, &omegas))
    });

    let mut totals = [Tally::default(); 6];
    let mut unstable = 0;
    let mut points = 0;
    for p in per_point.iter().flatten() {
        points += 1;
        unstable += p.unstable as usize;
        for (tot, t) in totals.iter_mut().zip(&p.t) {
            tot.merge(t);
        }
    }
    Ok(CheckReport {
        points,
        unstable,
        checks: NAMES
            .iter()
            .zip(totals)
            .map(|(name, t)| CheckOutcome {
                name,
                points_checked: t.checked,
                failures: t.failures,
                worst: t.worst,
            })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::presets::load_preset;

    #[test]
    fn presets_are_self_consistent() {
        for id in ["fig2a", "fig3a", "fig4a", "fig5a"] {
            let r = check_config(&load_preset(id).unwrap(), ExecMode::default()).unwrap();
            assert!(r.passed(), "{id}: {r:?}");
            assert!(r.checks.iter().all(|c| c.points_checked > 0), "{id}: {r:?}");
        }
    }

    #[test]
    fn tally_flags_nan() {
        let mut t = Tally::default();
        t.record(f64::NAN, false);
        assert!(t.worst.is_nan());
        assert_eq!(t.failures, 1);
    }
}
