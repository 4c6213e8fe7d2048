//! Phase-sensitive amplification: scattering matrix, gains, added noise and
//! amplified output spectra.
//!
//! The amplified quadratures are P of the cavity field and X of the mirror
//! and the Bogoliubov mode. Output spectra are symmetrized and expressed in
//! vacuum units, so a vacuum quadrature has spectrum ½.

use nalgebra::Matrix6;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linear_response::{
    build_drift, susceptibility_numeric, Mode, ResponseError, SusceptibilityMatrix, P_A, X_B,
    X_D,
};
use crate::params::{DimensionlessParams, Rates};
use crate::C64;

/// Quadrature each mode amplifies, as an index into `(X_a, P_a, X_b, P_b, X_d, P_d)`.
pub const AMPLIFIED_QUADRATURE: [(Mode, usize); 3] = [
    (Mode::Optical, P_A),
    (Mode::Mechanical, X_B),
    (Mode::Bogoliubov, X_D),
];

pub fn amplified_index(mode: Mode) -> usize {
    match mode {
        Mode::Optical => P_A,
        Mode::Mechanical => X_B,
        Mode::Bogoliubov => X_D,
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AmpError {
    #[error(transparent)]
    Response(#[from] ResponseError),
    #[error("gain vanishes at ω = {omega}; added noise is undefined")]
    ZeroGain { omega: f64 },
}

/// A closed-form value that may legitimately diverge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tagged {
    Finite(f64),
    /// Denominator hit zero.
    Infinite,
    /// 0/0 or ∞/∞ in the displayed form.
    Undefined,
}

impl Tagged {
    /// Classifies a raw ratio `num/den`.
    pub fn ratio(num: f64, den: f64) -> Self {
        if den == 0.0 {
            return if num == 0.0 || num.is_nan() {
                Tagged::Undefined
            } else {
                Tagged::Infinite
            };
        }
        Tagged::from_f64(num / den)
    }

    pub fn from_f64(x: f64) -> Self {
        if x.is_nan() {
            Tagged::Undefined
        } else if x.is_infinite() {
            Tagged::Infinite
        } else {
            Tagged::Finite(x)
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Tagged::Finite(x) => Some(x),
            _ => None,
        }
    }

    pub fn map(self, f: impl FnOnce(f64) -> f64) -> Self {
        match self {
            Tagged::Finite(x) => Tagged::from_f64(f(x)),
            other => other,
        }
    }
}

/// s(ω) = I − √Γ χ(ω) √Γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringMatrix {
    pub omega: f64,
    pub entries: Matrix6<C64>,
}

impl ScatteringMatrix {
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[(i, j)]
    }
}

pub fn scattering_matrix(chi: &SusceptibilityMatrix, rates: &Rates) -> ScatteringMatrix {
    let sqrt_rate: [f64; 6] = std::array::from_fn(|i| rates.for_quadrature(i).sqrt());
    let entries = Matrix6::from_fn(|i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        C64::from(delta) - chi.get(i, j) * (sqrt_rate[i] * sqrt_rate[j])
    });
    ScatteringMatrix {
        omega: chi.omega,
        entries,
    }
}

/// Scattering matrix straight from parameters via the resolvent.
pub fn scattering_at(d: &DimensionlessParams, omega: f64) -> Result<ScatteringMatrix, ResponseError> {
    let chi = susceptibility_numeric(&build_drift(d), omega)?;
    Ok(scattering_matrix(&chi, &d.rates()))
}

/// 𝒢_j(ω) = |s_jj(ω)|² on the amplified quadrature of `mode`.
pub fn gain_spectrum(s: &ScatteringMatrix, mode: Mode) -> f64 {
    let i = amplified_index(mode);
    s.get(i, i).norm_sqr()
}

fn input_occupancy(d: &DimensionlessParams, k: usize) -> f64 {
    match k / 2 {
        0 => d.n_a,
        1 => d.n_m,
        _ => d.n_d,
    }
}

/// Symmetrized output spectrum of quadrature `i`: Σ_k |s_ik|² (n̄_k + ½).
pub fn output_spectrum(s: &ScatteringMatrix, d: &DimensionlessParams, i: usize) -> f64 {
    (0..6)
        .map(|k| s.get(i, k).norm_sqr() * (input_occupancy(d, k) + 0.5))
        .sum()
}

/// Noise the other two modes add to the amplified quadrature, referred to the
/// input: 𝒢⁻¹ Σ_{k ∉ mode} |s_ik|² (n̄_k + ½).
pub fn added_noise_spectrum(
    s: &ScatteringMatrix,
    d: &DimensionlessParams,
    mode: Mode,
) -> Result<f64, AmpError> {
    let i = amplified_index(mode);
    let gain = gain_spectrum(s, mode);
    if gain == 0.0 {
        return Err(AmpError::ZeroGain { omega: s.omega });
    }
    let own = mode.x_index();
    let noise: f64 = (0..6)
        .filter(|&k| k / 2 != own / 2)
        .map(|k| s.get(i, k).norm_sqr() * (input_occupancy(d, k) + 0.5))
        .sum();
    Ok(noise / gain)
}

/// S̄^out of the amplified quadrature (S̄_PP,a, S̄_XX,m or S̄_XX,d).
pub fn amplified_spectrum(s: &ScatteringMatrix, d: &DimensionlessParams, mode: Mode) -> f64 {
    output_spectrum(s, d, amplified_index(mode))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplifierPoint {
    pub mode: Mode,
    pub omega: f64,
    pub gain: f64,
    pub added_noise: f64,
    pub amplified_spectrum: f64,
}

pub fn amplifier_point(
    d: &DimensionlessParams,
    mode: Mode,
    omega: f64,
) -> Result<AmplifierPoint, AmpError> {
    let s = scattering_at(d, omega)?;
    Ok(AmplifierPoint {
        mode,
        omega,
        gain: gain_spectrum(&s, mode),
        added_noise: added_noise_spectrum(&s, d, mode)?,
        amplified_spectrum: amplified_spectrum(&s, d, mode),
    })
}

/// √𝒢 = 𝒬/𝒫 at ω = 0 for one mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeGain {
    pub q: f64,
    pub p: f64,
    pub sqrt_gain: Tagged,
}

impl ModeGain {
    fn new(q: f64, p: f64) -> Self {
        Self {
            q,
            p,
            sqrt_gain: Tagged::ratio(q, p),
        }
    }

    pub fn gain(&self) -> Tagged {
        self.sqrt_gain.map(|x| x * x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceGains {
    pub optical: ModeGain,
    pub mechanical: ModeGain,
    pub bogoliubov: ModeGain,
    /// ξ_m where 𝒫_a vanishes (optical gain diverges).
    pub xi_m_pole: f64,
    /// ξ_m where 𝒬_a vanishes (optical gain vanishes).
    pub xi_m_zero: f64,
}

impl ResonanceGains {
    pub fn get(&self, mode: Mode) -> &ModeGain {
        match mode {
            Mode::Optical => &self.optical,
            Mode::Mechanical => &self.mechanical,
            Mode::Bogoliubov => &self.bogoliubov,
        }
    }
}

pub fn gain_on_resonance(d: &DimensionlessParams) -> ResonanceGains {
    let (c0, c1) = (d.c0, d.c1);
    let um = 1.0 - d.xi_m;
    let ud = 1.0 - d.xi_d;
    let pm = 1.0 + d.xi_m;
    let pd = 1.0 + d.xi_d;

    let p_a = c0 + um + c1 * um / ud;
    let q_a = c0 - um + c1 * um / ud;
    let q_m = c0 - pm - c1 * pm / ud;
    let p_d = c1 + ud + c0 * ud / um;
    let q_d = c1 - pd - c0 * pd / um;

    ResonanceGains {
        optical: ModeGain::new(q_a, p_a),
        mechanical: ModeGain::new(q_m, p_a),
        bogoliubov: ModeGain::new(q_d, p_d),
        xi_m_pole: 1.0 + c0 * ud / (c1 + ud),
        xi_m_zero: 1.0 + c0 * ud / (c1 - ud),
    }
}

/// One tagged on-resonance value per mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerModeTagged {
    pub optical: Tagged,
    pub mechanical: Tagged,
    pub bogoliubov: Tagged,
}

impl PerModeTagged {
    pub fn get(&self, mode: Mode) -> Tagged {
        match mode {
            Mode::Optical => self.optical,
            Mode::Mechanical => self.mechanical,
            Mode::Bogoliubov => self.bogoliubov,
        }
    }
}

pub fn added_noise_on_resonance(d: &DimensionlessParams) -> PerModeTagged {
    let gains = gain_on_resonance(d);
    let (c0, c1) = (d.c0, d.c1);
    let um = 1.0 - d.xi_m;
    let ud = 1.0 - d.xi_d;

    // (1 − 1/√𝒢)²·[(½+n̄_m)C₀/u_m² + (½+n̄_d)C₁/u_d²] with 𝒬 − 𝒫 = −2u_m
    // folded in, which avoids the cancellation near √𝒢 = 1 and the 0·∞ at ξ_m = 1.
    let q_a = gains.optical.q;
    let optical = Tagged::ratio(
        4.0 * ((0.5 + d.n_m) * c0 + (0.5 + d.n_d) * c1 * (um * um) / (ud * ud)),
        q_a * q_a,
    );
    let mirror = |c_self: f64, q: f64, n_other: f64, c_other: f64, u_other: f64| {
        let bracket = (d.n_a + 0.5) + (n_other + 0.5) * c_other / (u_other * u_other);
        Tagged::ratio(4.0 * c_self * bracket, q * q)
    };
    PerModeTagged {
        optical,
        mechanical: mirror(c0, gains.mechanical.q, d.n_d, c1, ud),
        bogoliubov: mirror(c1, gains.bogoliubov.q, d.n_m, c0, um),
    }
}

/// On-resonance amplified spectra 𝒢_j[(n̄_j + ½) + n̄_add,j], written over
/// the common 𝒫² so that 𝒬 = 0 (zero gain) stays finite.
pub fn amplified_spectrum_on_resonance(d: &DimensionlessParams) -> PerModeTagged {
    let g = gain_on_resonance(d);
    let um = 1.0 - d.xi_m;
    let ud = 1.0 - d.xi_d;
    let ba = (0.5 + d.n_m) * d.c0 / (um * um) + (0.5 + d.n_d) * d.c1 / (ud * ud);
    let bm = (d.n_a + 0.5) + (d.n_d + 0.5) * d.c1 / (ud * ud);
    let bd = (d.n_a + 0.5) + (d.n_m + 0.5) * d.c0 / (um * um);
    let (qa, pa) = (g.optical.q, g.optical.p);
    let (qm, pd, qd) = (g.mechanical.q, g.bogoliubov.p, g.bogoliubov.q);
    PerModeTagged {
        optical: Tagged::ratio(qa * qa * (d.n_a + 0.5) + (qa - pa).powi(2) * ba, pa * pa),
        mechanical: Tagged::ratio(qm * qm * (d.n_m + 0.5) + 4.0 * d.c0 * bm, pa * pa),
        bogoliubov: Tagged::ratio(qd * qd * (d.n_d + 0.5) + 4.0 * d.c1 * bd, pd * pd),
    }
}

/// 10·log₁₀ 𝒢.
pub fn gain_db(gain: f64) -> f64 {
    10.0 * gain.log10()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear_response::{susceptibility_numeric, P_B, P_D, X_A};
    use crate::params::collective_cooperativities;
    use approx::assert_relative_eq;

    fn fixture(c0: f64, c1: f64) -> DimensionlessParams {
        DimensionlessParams {
            c0,
            c1,
            ..DimensionlessParams::decoupled(1e4, 1.0)
        }
    }

    #[test]
    fn decoupled_reflection() {
        let d = DimensionlessParams::decoupled(100.0, 2.0);
        let s = scattering_at(&d, 0.0).unwrap();
        assert_relative_eq!(s.get(X_A, X_A).re, -1.0, max_relative = 1e-14);
        assert_relative_eq!(s.get(X_A, X_A).norm_sqr(), 1.0, max_relative = 1e-14);
        for i in 0..6 {
            for j in 0..6 {
                if i != j {
                    assert_eq!(s.get(i, j).norm(), 0.0);
                }
            }
        }
        for mode in Mode::ALL {
            for w in [0.0, 0.3, 40.0] {
                let s = scattering_at(&d, w).unwrap();
                assert_relative_eq!(gain_spectrum(&s, mode), 1.0, max_relative = 1e-13);
                assert_eq!(added_noise_spectrum(&s, &d, mode).unwrap(), 0.0);
                assert_relative_eq!(amplified_spectrum(&s, &d, mode), 0.5, max_relative = 1e-13);
            }
        }
        let hot = DimensionlessParams { n_a: 2.0, ..d };
        let s = scattering_at(&hot, 0.0).unwrap();
        assert_relative_eq!(amplified_spectrum(&s, &hot, Mode::Optical), 2.5, max_relative = 1e-13);
    }

    #[test]
    fn scattering_elements_from_chi() {
        let d = DimensionlessParams {
            xi_m: 0.4,
            xi_d: 0.2,
            gamma_d: 0.3,
            ..fixture(50.0, 3.0)
        };
        let chi = susceptibility_numeric(&build_drift(&d), 1.7).unwrap();
        let s = scattering_matrix(&chi, &d.rates());
        let diff = s.get(X_A, X_A) - (C64::from(1.0) - chi.get(X_A, X_A) * d.kappa);
        assert!(diff.norm() < 1e-12);
        let diff = s.get(P_B, P_D) - chi.get(P_B, P_D) * (-(d.gamma_d).sqrt());
        assert!(diff.norm() < 1e-12);
    }

    #[test]
    fn on_resonance_gain_fixtures() {
        let g = gain_on_resonance(&fixture(100.0, 0.0));
        assert_relative_eq!(g.optical.sqrt_gain.value().unwrap(), 99.0 / 101.0, max_relative = 1e-14);
        assert_relative_eq!(g.mechanical.sqrt_gain.value().unwrap(), 99.0 / 101.0, max_relative = 1e-14);
        assert_relative_eq!(g.optical.gain().value().unwrap(), 0.960_788_157, max_relative = 1e-8);
        let s = scattering_at(&fixture(100.0, 0.0), 0.0).unwrap();
        assert_relative_eq!(gain_spectrum(&s, Mode::Optical), (99.0f64 / 101.0).powi(2), max_relative = 1e-12);

        let g = gain_on_resonance(&fixture(100.0, 10.0));
        assert_relative_eq!(g.optical.sqrt_gain.value().unwrap(), 109.0 / 111.0, max_relative = 1e-14);
    }

    #[test]
    fn mirrored_parameters_swap_mech_and_bog_gains() {
        let d = DimensionlessParams {
            xi_m: 0.3,
            xi_d: 0.6,
            ..fixture(7.0, 2.0)
        };
        let g = gain_on_resonance(&d);
        let m = gain_on_resonance(&d.mirrored());
        assert_eq!(g.mechanical.sqrt_gain, m.bogoliubov.sqrt_gain);
        assert_eq!(g.bogoliubov.sqrt_gain, m.mechanical.sqrt_gain);
    }

    #[test]
    fn divergent_gain_is_tagged() {
        let base = fixture(100.0, 0.0);
        let xi = gain_on_resonance(&base).xi_m_pole;
        assert_relative_eq!(xi, 101.0, max_relative = 1e-15);
        let g = gain_on_resonance(&base.with_xi(xi, 0.0));
        assert_eq!(g.optical.sqrt_gain, Tagged::Infinite);
        assert_eq!(g.optical.gain(), Tagged::Infinite);
        let bounds = collective_cooperativities(&base).unwrap();
        assert_relative_eq!(bounds.xi_m_max, xi, max_relative = 1e-15);
    }

    #[test]
    fn added_noise_fixtures() {
        let d = DimensionlessParams {
            n_m: 100.0,
            ..fixture(100.0, 0.0)
        };
        let n = added_noise_on_resonance(&d).optical.value().unwrap();
        assert_relative_eq!(n, (2.0f64 / 99.0).powi(2) * 100.5 * 100.0, max_relative = 1e-12);
        assert!((n - 4.102).abs() < 1e-3);
        let s = scattering_at(&d, 0.0).unwrap();
        let spectral = added_noise_spectrum(&s, &d, Mode::Optical).unwrap();
        assert_relative_eq!(spectral, n, max_relative = 1e-10);

        let vac = added_noise_on_resonance(&fixture(100.0, 0.0)).optical.value().unwrap();
        assert_relative_eq!(vac, (2.0f64 / 99.0).powi(2) * 0.5 * 100.0, max_relative = 1e-12);
        assert!((vac - 0.02041).abs() < 1e-5);

        let no_mirror = added_noise_on_resonance(&fixture(0.0, 3.0));
        assert_eq!(no_mirror.mechanical, Tagged::Finite(0.0));
    }

    #[test]
    fn spectral_added_noise_matches_chi_formulas() {
        let d = DimensionlessParams {
            xi_m: 0.5,
            xi_d: 0.3,
            gamma_d: 2.0,
            n_a: 0.2,
            n_m: 30.0,
            n_d: 4.0,
            ..fixture(20.0, 5.0)
        };
        let (k, gm, gd) = (d.kappa, 1.0, d.gamma_d);
        let chi = susceptibility_numeric(&build_drift(&d), 3.3).unwrap();
        let s = scattering_matrix(&chi, &d.rates());
        let c = |i: usize, j: usize| chi.get(i - 1, j - 1);
        let ga = (C64::from(1.0) - c(2, 2) * k).norm_sqr();
        let gmech = (C64::from(1.0) - c(3, 3) * gm).norm_sqr();
        let gbog = (C64::from(1.0) - c(5, 5) * gd).norm_sqr();
        let na = k / ga * ((d.n_m + 0.5) * gm * c(2, 3).norm_sqr() + (d.n_d + 0.5) * gd * c(2, 5).norm_sqr());
        let nm = gm / gmech * ((d.n_a + 0.5) * k * c(3, 2).norm_sqr() + (d.n_d + 0.5) * gd * c(3, 5).norm_sqr());
        let nd = gd / gbog * ((d.n_a + 0.5) * k * c(5, 2).norm_sqr() + (d.n_m + 0.5) * gm * c(5, 3).norm_sqr());
        for (mode, gain, noise, occ) in [
            (Mode::Optical, ga, na, d.n_a),
            (Mode::Mechanical, gmech, nm, d.n_m),
            (Mode::Bogoliubov, gbog, nd, d.n_d),
        ] {
            assert_relative_eq!(gain_spectrum(&s, mode), gain, max_relative = 1e-12);
            assert_relative_eq!(added_noise_spectrum(&s, &d, mode).unwrap(), noise, max_relative = 1e-12);
            assert_relative_eq!(
                amplified_spectrum(&s, &d, mode) / gain,
                occ + 0.5 + noise,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn on_resonance_amplified_spectra_match_spectral_route() {
        let d = DimensionlessParams {
            xi_m: 0.8,
            xi_d: 0.3,
            n_a: 0.3,
            n_m: 100.0,
            n_d: 2.0,
            ..fixture(40.0, 3.0)
        };
        let closed = amplified_spectrum_on_resonance(&d);
        let s = scattering_at(&d, 0.0).unwrap();
        for mode in Mode::ALL {
            let spectral = amplified_spectrum(&s, &d, mode);
            assert_relative_eq!(closed.get(mode).value().unwrap(), spectral, max_relative = 1e-9);
        }
    }

    #[test]
    fn tagged_ratio_classification() {
        assert_eq!(Tagged::ratio(1.0, 0.0), Tagged::Infinite);
        assert_eq!(Tagged::ratio(0.0, 0.0), Tagged::Undefined);
        assert_eq!(Tagged::ratio(3.0, 2.0), Tagged::Finite(1.5));
        assert_eq!(Tagged::Infinite.map(|x| x * x), Tagged::Infinite);
    }
}
