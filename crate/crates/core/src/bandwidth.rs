//! Gain-bandwidth of the amplified quadratures.
//!
//! The analytic estimates come from approximating the common denominator of
//! s_jj(ω) by a cubic `iω³ + aω² + bω + c`. They are only trustworthy near
//! ξ_d = 0, ξ_m → ξ_m_max, weak coupling; [`fwhm_numeric`] is the exact
//! reference and works anywhere a half-maximum crossing exists.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amplifier::{gain_on_resonance, gain_spectrum, scattering_at, Tagged};
use crate::exec::{self, ExecMode};
use crate::linear_response::Mode;
use crate::params::DimensionlessParams;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BandwidthError {
    #[error("bandwidth undefined: {0}")]
    Undefined(&'static str),
}

/// Coefficients of the cubic denominator, in powers of γ_m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl CubicCoeffs {
    /// Natural scale of `c`, κγ̄²/8 · (C₀ + C₁ + 1), for relative comparisons.
    pub fn c_scale(d: &DimensionlessParams) -> f64 {
        d.kappa * d.gamma_d / 8.0 * (d.c0 + d.c1 + 1.0)
    }
}

pub fn cubic_coefficients(d: &DimensionlessParams) -> CubicCoeffs {
    let (k, gd) = (d.kappa, d.gamma_d);
    let (xm, xd) = (d.xi_m, d.xi_d);
    // γ_m = 1, so γ̄² = γ_d.
    let b = (k * (d.c0 + 1.0 - xm) + k * gd * (d.c1 + 1.0 - xd) + gd * xm * xd) / 4.0;
    let c = k * gd / 8.0
        * (d.c0 * (1.0 - xd) + d.c1 * (1.0 - xm) + 1.0 + xm * xd - xm - xd);
    let a = -(k + (1.0 - xm) + gd * (1.0 - xd)) / 2.0;
    CubicCoeffs { a, b, c }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeFlags {
    pub xi_d_zero: bool,
    /// 𝒢_a(0) > 100.
    pub large_gain: bool,
    /// g, G < κ/10.
    pub weak_coupling: bool,
}

impl RegimeFlags {
    pub fn all(&self) -> bool {
        self.xi_d_zero && self.large_gain && self.weak_coupling
    }
}

pub fn regime_flags(d: &DimensionlessParams) -> RegimeFlags {
    let gain = gain_on_resonance(d).optical.gain();
    RegimeFlags {
        xi_d_zero: d.xi_d == 0.0,
        large_gain: match gain {
            Tagged::Finite(g) => g > 100.0,
            Tagged::Infinite => true,
            Tagged::Undefined => false,
        },
        weak_coupling: d.g_om() < d.kappa / 10.0 && d.g_atom() < d.kappa / 10.0,
    }
}

/// The three analytic optical gain-bandwidth estimates, in units of γ_m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandwidthEstimates {
    /// 2b/(−a) with c → 0 at ξ_d = 0.
    pub cubic_ratio: f64,
    /// Large-gain form with √𝒢_a kept explicit.
    pub large_gain: f64,
    /// (8g²/κ)[1/√𝒢_a + C₁(ξ_m−1)/(2C₀) + γ_d(1+C₁)/(2C₀)].
    pub weak_coupling: f64,
    pub flags: RegimeFlags,
}

pub fn gain_bandwidth_analytic(d: &DimensionlessParams) -> Result<BandwidthEstimates, BandwidthError> {
    let sqrt_g = match gain_on_resonance(d).optical.sqrt_gain {
        Tagged::Finite(0.0) => return Err(BandwidthError::Undefined("zero optical gain")),
        Tagged::Finite(r) => r.abs(),
        Tagged::Infinite => f64::INFINITY,
        Tagged::Undefined => return Err(BandwidthError::Undefined("optical gain undefined")),
    };
    let (k, gd, c0, c1, xm) = (d.kappa, d.gamma_d, d.c0, d.c1, d.xi_m);
    let cubic_ratio = (k * (c0 + 1.0 - xm) + k * gd * (c1 + 1.0)) / (k + (1.0 - xm) + gd);

    let large_gain = if sqrt_g.is_infinite() {
        -(c1 * (1.0 - xm) - gd * (1.0 + c1)) / (1.0 - (c0 + c1 * (1.0 - xm)) / k)
    } else {
        2.0 * c0 * (1.0 - sqrt_g / (2.0 * c0) * (c1 * (1.0 - xm) - gd * (1.0 + c1)))
            / (1.0 - (c0 + c1 * (1.0 - xm)) / k)
            / sqrt_g
    };

    // 8g²/κ = 2C₀γ_m.
    let weak_coupling = 2.0 * c0
        * (1.0 / sqrt_g + c1 / (2.0 * c0) * (xm - 1.0) + gd * (1.0 + c1) / (2.0 * c0));

    Ok(BandwidthEstimates {
        cubic_ratio,
        large_gain,
        weak_coupling,
        flags: regime_flags(d),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FwhmOptions {
    /// Log-spaced scan points between `omega_min` and 10κ.
    pub points: usize,
    pub omega_min: f64,
    /// Relative bisection tolerance on the crossing frequency.
    pub rel_tol: f64,
    pub exec: ExecMode,
}

impl Default for FwhmOptions {
    fn default() -> Self {
        Self {
            points: 4096,
            omega_min: 1e-8,
            rel_tol: 1e-10,
            exec: ExecMode::Sequential,
        }
    }
}

fn gain_at(d: &DimensionlessParams, mode: Mode, omega: f64) -> Result<f64, BandwidthError> {
    scattering_at(d, omega)
        .map(|s| gain_spectrum(&s, mode))
        .map_err(|_| BandwidthError::Undefined("gain has a pole on the real axis"))
}

pub fn fwhm_numeric(d: &DimensionlessParams, mode: Mode) -> Result<f64, BandwidthError> {
    fwhm_numeric_with(d, mode, &FwhmOptions::default())
}

/// Full width at half maximum of 𝒢(ω) about ω = 0.
pub fn fwhm_numeric_with(
    d: &DimensionlessParams,
    mode: Mode,
    opts: &FwhmOptions,
) -> Result<f64, BandwidthError> {
    let g0 = gain_at(d, mode, 0.0)?;
    if !g0.is_finite() || g0 <= 0.0 {
        return Err(BandwidthError::Undefined("on-resonance gain is not finite"));
    }
    let half = 0.5 * g0;
    let lo = opts.omega_min * d.gamma_d.min(1.0);
    let hi = 10.0 * d.kappa;
    let n = opts.points.max(2);
    let ratio = (hi / lo).ln() / (n - 1) as f64;
    let grid: Vec<f64> = (0..n).map(|i| lo * (ratio * i as f64).exp()).collect();
    let gains = exec::map(opts.exec, &grid, |&w| gain_at(d, mode, w));

    let mut prev = 0.0;
    for (w, g) in grid.iter().zip(gains) {
        let g = g?;
        if g <= half {
            let (mut a, mut b) = (prev, *w);
            while b - a > opts.rel_tol * b {
                let mid = 0.5 * (a + b);
                if gain_at(d, mode, mid)? <= half {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            return Ok(a + b);
        }
        prev = *w;
    }
    Err(BandwidthError::Undefined("no half-maximum crossing in the scan window"))
}

/// Analytic and numeric optical bandwidth side by side.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandwidthResult {
    pub analytic: Option<f64>,
    pub numeric: Option<f64>,
    pub flags: RegimeFlags,
}

pub fn bandwidth(d: &DimensionlessParams) -> BandwidthResult {
    let est = gain_bandwidth_analytic(d).ok();
    BandwidthResult {
        analytic: est.map(|e| e.weak_coupling),
        numeric: fwhm_numeric(d, Mode::Optical).ok(),
        flags: regime_flags(d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::collective_cooperativities;
    use approx::assert_relative_eq;

    fn fixture(kappa: f64, gamma_d: f64, c0: f64, c1: f64) -> DimensionlessParams {
        DimensionlessParams {
            c0,
            c1,
            ..DimensionlessParams::decoupled(kappa, gamma_d)
        }
    }

    #[test]
    fn c_vanishes_at_the_ceiling() {
        let d = fixture(1e4, 1.0, 100.0, 10.0);
        let xi = collective_cooperativities(&d).unwrap().xi_m_max;
        let c = cubic_coefficients(&d.with_xi(xi, 0.0)).c;
        assert!(c.abs() <= 1e-12 * CubicCoeffs::c_scale(&d), "{c}");
    }

    #[test]
    fn coefficient_fixtures() {
        let d = fixture(100.0, 0.5, 3.0, 2.0);
        let cc = cubic_coefficients(&d);
        assert_relative_eq!(4.0 * cc.b, 100.0 * 4.0 + 100.0 * 0.5 * 3.0, max_relative = 1e-15);
        let bare = cubic_coefficients(&fixture(100.0, 0.5, 0.0, 0.0));
        assert_relative_eq!(-2.0 * bare.a, 100.0 + 1.0 + 0.5, max_relative = 1e-15);
    }

    #[test]
    fn analytic_fixture_and_positivity() {
        // κ=100, γ_d=0.1, C₀=100, C₁=1, ξ_m = 0.99 ξ_m_max
        let d = fixture(100.0, 0.1, 100.0, 1.0);
        let xi = 0.99 * collective_cooperativities(&d).unwrap().xi_m_max;
        let d = d.with_xi(xi, 0.0);
        let e = gain_bandwidth_analytic(&d).unwrap();
        let sqrt_g = gain_on_resonance(&d).optical.sqrt_gain.value().unwrap();
        let expect = 200.0 * (1.0 / sqrt_g + (xi - 1.0) / 200.0 + 0.1 * 2.0 / 200.0);
        assert_relative_eq!(e.weak_coupling, expect, max_relative = 1e-14);
        assert!(e.cubic_ratio > 0.0 && e.large_gain > 0.0 && e.weak_coupling > 0.0);
    }

    #[test]
    fn atom_coupling_widens_the_estimate() {
        let base = fixture(1e4, 1.0, 100.0, 0.0).with_xi(90.0, 0.0);
        let with_bec = DimensionlessParams { c1: 0.5, ..base };
        // Third bracket term γ_d(1+C₁)/(2C₀) grows with C₁.
        let third = |d: &DimensionlessParams| d.gamma_d * (1.0 + d.c1) / (2.0 * d.c0);
        assert!(third(&with_bec) > third(&base));
    }

    #[test]
    fn decoupled_has_no_bandwidth() {
        assert!(fwhm_numeric(&fixture(100.0, 1.0, 0.0, 0.0), Mode::Optical).is_err());
    }

    #[test]
    fn adiabatic_peak_width() {
        // C₁ = 0, κ ≫ C₀: 𝒢(ω) = (A² + ω²)/(B² + ω²), FWHM = 2AB/√(A² − 2B²).
        let d = fixture(1e6, 1.0, 10.0, 0.0);
        let xi = 0.9 * collective_cooperativities(&d).unwrap().xi_m_max;
        let d = d.with_xi(xi, 0.0);
        let a = 0.5 * (d.c0 - 1.0 + xi).abs();
        let b = 0.5 * (1.0 - xi + d.c0);
        let expect = 2.0 * a * b / (a * a - 2.0 * b * b).sqrt();
        let got = fwhm_numeric(&d, Mode::Optical).unwrap();
        assert_relative_eq!(got, expect, max_relative = 1e-2);
    }

    #[test]
    fn grid_refinement_is_stable() {
        let d = fixture(1e4, 1.0, 50.0, 0.0);
        let d = d.with_xi(0.95 * collective_cooperativities(&d).unwrap().xi_m_max, 0.0);
        let coarse = fwhm_numeric(&d, Mode::Optical).unwrap();
        let fine = fwhm_numeric_with(
            &d,
            Mode::Optical,
            &FwhmOptions {
                points: 8192,
                ..FwhmOptions::default()
            },
        )
        .unwrap();
        assert!((coarse - fine).abs() < 1e-3 * fine);
    }
}
