//! Squeezing of the complementary quadratures: X of the cavity output and P
//! of the mirror and Bogoliubov outputs.
//!
//! Spectra are symmetrized, in vacuum units (vacuum = ½). Squeezing in dB is
//! `−10·log₁₀(2S̄)`, positive below the vacuum level.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::amplifier::{amplified_index, output_spectrum, scattering_at, ScatteringMatrix};
use crate::linear_response::{Mode, ResponseError, P_B, P_D, X_A};
use crate::params::{collective_cooperativities, DimensionlessParams};

/// Quadrature each mode squeezes.
pub const SQUEEZED_QUADRATURE: [(Mode, usize); 3] = [
    (Mode::Optical, X_A),
    (Mode::Mechanical, P_B),
    (Mode::Bogoliubov, P_D),
];

pub fn squeezed_index(mode: Mode) -> usize {
    match mode {
        Mode::Optical => X_A,
        Mode::Mechanical => P_B,
        Mode::Bogoliubov => P_D,
    }
}

/// Slack allowed on S̄_XX·S̄_PP − S̄_XP·S̄_PX before it counts as negative.
pub const PURITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SqueezeError {
    #[error(transparent)]
    Response(#[from] ResponseError),
    #[error("singular configuration: {quantity} = 0")]
    Singular { quantity: &'static str },
    #[error("unphysical spectra: S_XX*S_PP - S_XP*S_PX = {discriminant}")]
    Unphysical { discriminant: f64 },
}

/// −10·log₁₀(2S̄).
pub fn squeezing_db(spectrum: f64) -> f64 {
    -10.0 * (2.0 * spectrum).log10()
}

/// S̄^out(ω) of the squeezed quadrature of `mode`.
pub fn squeezing_spectrum(s: &ScatteringMatrix, d: &DimensionlessParams, mode: Mode) -> f64 {
    output_spectrum(s, d, squeezed_index(mode))
}

/// S̄_XP(ω) = S̄_PX(ω) for `mode`, summed over input modes k as
/// −½·Im Σ_k [s_{x,X_k} s*_{p,P_k} + s_{p,X_k} s*_{x,P_k}].
pub fn cross_correlation_spectrum(s: &ScatteringMatrix, mode: Mode) -> f64 {
    let (x, p) = (mode.x_index(), mode.p_index());
    let sum: crate::C64 = (0..3)
        .map(|k| {
            let (xk, pk) = (2 * k, 2 * k + 1);
            s.get(x, xk) * s.get(p, pk).conj() + s.get(p, xk) * s.get(x, pk).conj()
        })
        .sum();
    -0.5 * sum.im
}

/// Effective thermal occupancy n_eff = √(S̄_XX S̄_PP − S̄_XP S̄_PX) − ½.
pub fn purity(s_xx: f64, s_pp: f64, s_xp: f64, s_px: f64) -> Result<f64, SqueezeError> {
    let disc = s_xx * s_pp - s_xp * s_px;
    if disc < -PURITY_TOLERANCE * (s_xx * s_pp).abs().max(1.0) {
        return Err(SqueezeError::Unphysical { discriminant: disc });
    }
    Ok(disc.max(0.0).sqrt() - 0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezePoint {
    pub mode: Mode,
    pub omega: f64,
    pub spectrum: f64,
    pub squeezing_db: f64,
    pub cross_correlation: f64,
    pub n_eff: f64,
}

pub fn squeeze_point_from(
    s: &ScatteringMatrix,
    d: &DimensionlessParams,
    mode: Mode,
) -> Result<SqueezePoint, SqueezeError> {
    let sq = squeezing_spectrum(s, d, mode);
    let amp = output_spectrum(s, d, amplified_index(mode));
    let xp = cross_correlation_spectrum(s, mode);
    Ok(SqueezePoint {
        mode,
        omega: s.omega,
        spectrum: sq,
        squeezing_db: squeezing_db(sq),
        cross_correlation: xp,
        n_eff: purity(sq, amp, xp, xp)?,
    })
}

pub fn squeeze_point(
    d: &DimensionlessParams,
    mode: Mode,
    omega: f64,
) -> Result<SqueezePoint, SqueezeError> {
    squeeze_point_from(&scattering_at(d, omega)?, d, mode)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EtaFactors {
    pub eta_a: f64,
    pub eta_m: f64,
    pub eta_d: f64,
    pub s_m: f64,
    pub s_d: f64,
}

pub fn eta_s_factors(d: &DimensionlessParams) -> EtaFactors {
    let (c0, c1, xm, xd) = (d.c0, d.c1, d.xi_m, d.xi_d);
    EtaFactors {
        eta_a: 1.0 + c0 / (1.0 + xm) + c1 / (1.0 + xd),
        eta_m: c0 + xm - 1.0 + c1 * (xm - 1.0) / (1.0 + xd),
        eta_d: c1 + xd - 1.0 + c0 * (xd - 1.0) / (1.0 + xm),
        s_m: c0 + 1.0 + xm + c1 * (1.0 + xm) / (1.0 + xd),
        s_d: c1 + 1.0 + xd + c0 * (1.0 + xd) / (1.0 + xm),
    }
}

/// On-resonance output spectra of the squeezed quadratures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceSqueezing {
    pub optical: f64,
    pub mechanical: f64,
    pub bogoliubov: f64,
}

impl ResonanceSqueezing {
    pub fn get(&self, mode: Mode) -> f64 {
        match mode {
            Mode::Optical => self.optical,
            Mode::Mechanical => self.mechanical,
            Mode::Bogoliubov => self.bogoliubov,
        }
    }
}

pub fn squeezing_on_resonance(d: &DimensionlessParams) -> Result<ResonanceSqueezing, SqueezeError> {
    let f = eta_s_factors(d);
    for (quantity, v) in [("eta_a", f.eta_a), ("s_m", f.s_m), ("s_d", f.s_d)] {
        if v == 0.0 {
            return Err(SqueezeError::Singular { quantity });
        }
    }
    let (c0, c1) = (d.c0, d.c1);
    let ta = 1.0 + 2.0 * d.n_a;
    let tm = 1.0 + 2.0 * d.n_m;
    let td = 1.0 + 2.0 * d.n_d;
    let pm2 = (1.0 + d.xi_m).powi(2);
    let pd2 = (1.0 + d.xi_d).powi(2);

    let optical = ta * (1.0 - 2.0 / f.eta_a).powi(2)
        + (tm * 4.0 * c0 / pm2 + td * 4.0 * c1 / pd2) / (f.eta_a * f.eta_a);
    let mechanical =
        (tm * f.eta_m * f.eta_m + 4.0 * c0 * ta + 4.0 * c0 * c1 / pd2 * td) / (f.s_m * f.s_m);
    let bogoliubov =
        (td * f.eta_d * f.eta_d + 4.0 * c1 * ta + 4.0 * c1 * c0 / pm2 * tm) / (f.s_d * f.s_d);
    Ok(ResonanceSqueezing {
        optical: 0.5 * optical,
        mechanical: 0.5 * mechanical,
        bogoliubov: 0.5 * bogoliubov,
    })
}

/// Large-drive limit of the on-resonance cavity X spectrum (ratio to ½),
/// reached at ξ_d = 0, ξ_m = ξ_m,sq where η_a = 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityLimit {
    /// C₀/(1−C₁) − 1.
    pub xi_m: f64,
    /// The same point written through the ceiling: [(1+C₁)ξ_m_max − 2]/(1−C₁).
    pub xi_m_via_bound: f64,
    pub xi_m_max: f64,
    /// (1−C₁)²(1+2n̄_m)/C₀ + C₁(1+2n̄_d).
    pub limit: f64,
    pub applicable: bool,
    pub beyond_stability_bound: bool,
}

/// Large-drive limit of the on-resonance mirror P spectrum (ratio to ½).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MechLimit {
    pub xi_m: f64,
    pub xi_d: f64,
    pub limit: f64,
    pub applicable: bool,
    pub beyond_stability_bound: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticLimits {
    pub cavity: CavityLimit,
    /// No atomic modulation, ξ_m = 2 − ξ_m_max.
    pub mech_case_i: MechLimit,
    /// No mirror modulation, ξ_d = (C₁+1−C₀)/(C₀−1).
    pub mech_case_ii: MechLimit,
}

fn xi_ceilings(d: &DimensionlessParams, xi_m: f64, xi_d: f64) -> (f64, f64) {
    collective_cooperativities(&d.with_xi(xi_m, xi_d))
        .map(|b| (b.xi_m_max, b.xi_d_max))
        .unwrap_or((f64::NAN, f64::NAN))
}

pub fn asymptotic_limits(d: &DimensionlessParams) -> AsymptoticLimits {
    let (c0, c1) = (d.c0, d.c1);
    let ta = 1.0 + 2.0 * d.n_a;
    let tm = 1.0 + 2.0 * d.n_m;
    let td = 1.0 + 2.0 * d.n_d;

    let (xi_m_max, _) = xi_ceilings(d, 0.0, 0.0);
    let xi_sq = c0 / (1.0 - c1) - 1.0;
    let cavity = CavityLimit {
        xi_m: xi_sq,
        xi_m_via_bound: ((1.0 + c1) * xi_m_max - 2.0) / (1.0 - c1),
        xi_m_max,
        limit: (1.0 - c1).powi(2) * tm / c0 + c1 * td,
        applicable: c1 < 1.0 && c0 > 0.0 && xi_sq >= 0.0,
        beyond_stability_bound: xi_sq >= xi_m_max,
    };

    let xi_i = 2.0 - xi_m_max;
    let mech_case_i = MechLimit {
        xi_m: xi_i,
        xi_d: 0.0,
        limit: c0 / (c1 * c1) * ta + c0 / c1 * td,
        applicable: xi_i >= 0.0 && c1 > 0.0,
        beyond_stability_bound: xi_i >= xi_m_max,
    };

    let xi_ii = (c1 + 1.0 - c0) / (c0 - 1.0);
    let (_, xi_d_max) = xi_ceilings(d, 0.0, 0.0);
    let beyond = !(xi_ii < xi_d_max);
    let mech_case_ii = MechLimit {
        xi_m: 0.0,
        xi_d: xi_ii,
        limit: ta / c0 + (c0 - 1.0) / c1 * td,
        applicable: c0 > 1.0 && c1 > c0 - 1.0 && !beyond,
        beyond_stability_bound: beyond,
    };

    AsymptoticLimits {
        cavity,
        mech_case_i,
        mech_case_ii,
    }
}
