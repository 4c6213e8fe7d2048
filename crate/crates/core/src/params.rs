//! Parameter sets and the quantities derived directly from them.
//!
//! [`PhysicalParams`] is the laboratory description (angular frequencies in
//! rad/s). [`DimensionlessParams`] is what every other module consumes: the
//! two cooperativities, the two modulation amplitudes ξ = 2λ/γ, the bath
//! occupancies, and the cavity and Bogoliubov damping rates expressed in
//! units of γ_m.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("invalid parameter `{field}`: {reason} (got {value})")]
    Invalid {
        field: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("singular configuration: {0}")]
    Singular(&'static str),
}

fn positive(field: &'static str, value: f64) -> Result<(), ParamError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(ParamError::Invalid {
            field,
            value,
            reason: "must be finite and strictly positive",
        })
    }
}

fn non_negative(field: &'static str, value: f64) -> Result<(), ParamError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(ParamError::Invalid {
            field,
            value,
            reason: "must be finite and non-negative",
        })
    }
}

/// Laboratory-unit description of the linearized system.
///
/// Rates and couplings are angular frequencies. The paramp amplitudes are the
/// moduli |λ_m|, |λ_d|; their phases are absorbed into the modulation phases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalParams {
    pub kappa: f64,
    pub gamma_m: f64,
    pub gamma_d: f64,
    /// Enhanced optomechanical coupling g.
    pub g_om: f64,
    /// Enhanced opto-atomic coupling G.
    pub g_atom: f64,
    #[serde(default)]
    pub lambda_m: f64,
    #[serde(default)]
    pub lambda_d: f64,
    #[serde(default)]
    pub n_a: f64,
    #[serde(default)]
    pub n_m: f64,
    #[serde(default)]
    pub n_d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeWarning {
    /// g ≥ κ: outside the weak-coupling regime.
    StrongOptomechanicalCoupling,
    /// G ≥ κ: outside the weak-coupling regime.
    StrongOptoAtomicCoupling,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        positive("kappa", self.kappa)?;
        positive("gamma_m", self.gamma_m)?;
        positive("gamma_d", self.gamma_d)?;
        non_negative("g_om", self.g_om)?;
        non_negative("g_atom", self.g_atom)?;
        non_negative("lambda_m", self.lambda_m)?;
        non_negative("lambda_d", self.lambda_d)?;
        non_negative("n_a", self.n_a)?;
        non_negative("n_m", self.n_m)?;
        non_negative("n_d", self.n_d)
    }

    /// Weak-coupling violations. These are warnings only: every formula in
    /// the crate stays evaluable when g or G exceed κ.
    pub fn regime_warnings(&self) -> Vec<RegimeWarning> {
        let mut out = Vec::new();
        if self.g_om >= self.kappa {
            out.push(RegimeWarning::StrongOptomechanicalCoupling);
        }
        if self.g_atom >= self.kappa {
            out.push(RegimeWarning::StrongOptoAtomicCoupling);
        }
        out
    }
}

/// The working parameter set, in units of γ_m.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessParams {
    /// Optomechanical cooperativity C₀ = 4g²/(κγ_m).
    pub c0: f64,
    /// Opto-atomic cooperativity C₁ = 4G²/(κγ_d).
    pub c1: f64,
    /// ξ_m = 2λ_m/γ_m.
    pub xi_m: f64,
    /// ξ_d = 2λ_d/γ_d.
    pub xi_d: f64,
    /// κ/γ_m.
    pub kappa: f64,
    /// γ_d/γ_m.
    pub gamma_d: f64,
    pub n_a: f64,
    pub n_m: f64,
    pub n_d: f64,
}

/// Damping rates in units of γ_m, in mode order (cavity, mirror, Bogoliubov).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    pub kappa: f64,
    pub gamma_m: f64,
    pub gamma_d: f64,
}

impl Rates {
    /// Rate feeding quadrature `index` (0..6).
    pub fn for_quadrature(&self, index: usize) -> f64 {
        match index / 2 {
            0 => self.kappa,
            1 => self.gamma_m,
            _ => self.gamma_d,
        }
    }
}

impl DimensionlessParams {
    /// Decoupled, unmodulated, zero-temperature system with the given rates.
    pub fn decoupled(kappa: f64, gamma_d: f64) -> Self {
        Self {
            c0: 0.0,
            c1: 0.0,
            xi_m: 0.0,
            xi_d: 0.0,
            kappa,
            gamma_d,
            n_a: 0.0,
            n_m: 0.0,
            n_d: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        positive("kappa", self.kappa)?;
        positive("gamma_d", self.gamma_d)?;
        non_negative("c0", self.c0)?;
        non_negative("c1", self.c1)?;
        non_negative("xi_m", self.xi_m)?;
        non_negative("xi_d", self.xi_d)?;
        non_negative("n_a", self.n_a)?;
        non_negative("n_m", self.n_m)?;
        non_negative("n_d", self.n_d)
    }

    pub fn rates(&self) -> Rates {
        Rates {
            kappa: self.kappa,
            gamma_m: 1.0,
            gamma_d: self.gamma_d,
        }
    }

    /// g = √(C₀κγ_m/4).
    pub fn g_om(&self) -> f64 {
        (self.c0 * self.kappa / 4.0).sqrt()
    }

    /// G = √(C₁κγ_d/4).
    pub fn g_atom(&self) -> f64 {
        (self.c1 * self.kappa * self.gamma_d / 4.0).sqrt()
    }

    pub fn lambda_m(&self) -> f64 {
        self.xi_m / 2.0
    }

    pub fn lambda_d(&self) -> f64 {
        self.xi_d * self.gamma_d / 2.0
    }

    pub fn with_xi(mut self, xi_m: f64, xi_d: f64) -> Self {
        self.xi_m = xi_m;
        self.xi_d = xi_d;
        self
    }

    /// Exchanges the roles of the mirror and the Bogoliubov mode:
    /// (C₀, ξ_m, n̄_m) ↔ (C₁, ξ_d, n̄_d). Rates are left alone, so this is only
    /// a symmetry of the on-resonance (rate-free) observables.
    pub fn mirrored(&self) -> Self {
        Self {
            c0: self.c1,
            c1: self.c0,
            xi_m: self.xi_d,
            xi_d: self.xi_m,
            n_m: self.n_d,
            n_d: self.n_m,
            ..*self
        }
    }

    /// Reconstructs laboratory values given the mechanical damping rate.
    pub fn to_physical(&self, gamma_m: f64) -> PhysicalParams {
        PhysicalParams {
            kappa: self.kappa * gamma_m,
            gamma_m,
            gamma_d: self.gamma_d * gamma_m,
            g_om: self.g_om() * gamma_m,
            g_atom: self.g_atom() * gamma_m,
            lambda_m: self.lambda_m() * gamma_m,
            lambda_d: self.lambda_d() * gamma_m,
            n_a: self.n_a,
            n_m: self.n_m,
            n_d: self.n_d,
        }
    }

    /// (g < κ, G < κ).
    pub fn weak_coupling(&self) -> (bool, bool) {
        (self.g_om() < self.kappa, self.g_atom() < self.kappa)
    }
}

/// Converts laboratory parameters into the dimensionless working set.
pub fn derive_dimensionless(p: &PhysicalParams) -> Result<DimensionlessParams, ParamError> {
    p.validate()?;
    for w in p.regime_warnings() {
        log::warn!("outside the weak-coupling regime: {w:?}");
    }
    Ok(DimensionlessParams {
        c0: 4.0 * p.g_om * p.g_om / (p.kappa * p.gamma_m),
        c1: 4.0 * p.g_atom * p.g_atom / (p.kappa * p.gamma_d),
        xi_m: 2.0 * p.lambda_m / p.gamma_m,
        xi_d: 2.0 * p.lambda_d / p.gamma_d,
        kappa: p.kappa / p.gamma_m,
        gamma_d: p.gamma_d / p.gamma_m,
        n_a: p.n_a,
        n_m: p.n_m,
        n_d: p.n_d,
    })
}

/// Collective cooperativities and the modulation ceilings ξ_max = 1 + C.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityBounds {
    pub c_m: f64,
    pub c_d: f64,
    pub xi_m_max: f64,
    pub xi_d_max: f64,
}

fn collective(c_own: f64, c_other: f64, xi_other: f64) -> Result<f64, ParamError> {
    let x2 = xi_other * xi_other;
    let num = 1.0 + c_other - x2;
    let den = num * num - x2 * c_other * c_other;
    if den == 0.0 || !den.is_finite() {
        return Err(ParamError::Singular(
            "collective cooperativity denominator vanishes",
        ));
    }
    Ok(c_own * num / den)
}

/// C_m and C_d.
///
/// The two are mutually coupled: C_m is evaluated at the current ξ_d and C_d
/// at the current ξ_m. At ξ_d = 0, C_m reduces to C₀/(1+C₁). Away from
/// ξ_d = 0 the ceiling 1 + C_m overestimates the true instability onset;
/// use [`crate::linear_response::stability_eigen`] for that.
pub fn collective_cooperativities(d: &DimensionlessParams) -> Result<StabilityBounds, ParamError> {
    let c_m = collective(d.c0, d.c1, d.xi_d)?;
    let c_d = collective(d.c1, d.c0, d.xi_m)?;
    Ok(StabilityBounds {
        c_m,
        c_d,
        xi_m_max: 1.0 + c_m,
        xi_d_max: 1.0 + c_d,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Stable,
    Marginal,
    Unstable,
    /// The bound itself could not be evaluated (singular denominator).
    Undefined,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeMargin {
    pub xi: f64,
    pub xi_max: f64,
    /// ξ/ξ_max.
    pub ratio: f64,
    /// 1 − ξ/ξ_max.
    pub margin: f64,
    pub status: BoundStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarginReport {
    pub mech: ModeMargin,
    pub atom: ModeMargin,
}

/// Relative band around ξ/ξ_max = 1 reported as marginal.
pub const MARGINAL_TOLERANCE: f64 = 1e-9;

fn margin(xi: f64, bound: Result<f64, ParamError>) -> ModeMargin {
    match bound {
        Ok(c) => {
            let xi_max = 1.0 + c;
            let ratio = xi / xi_max;
            let status = if (ratio - 1.0).abs() <= MARGINAL_TOLERANCE {
                BoundStatus::Marginal
            } else if ratio < 1.0 {
                BoundStatus::Stable
            } else {
                BoundStatus::Unstable
            };
            ModeMargin {
                xi,
                xi_max,
                ratio,
                margin: 1.0 - ratio,
                status,
            }
        }
        Err(_) => ModeMargin {
            xi,
            xi_max: f64::NAN,
            ratio: f64::NAN,
            margin: f64::NAN,
            status: BoundStatus::Undefined,
        },
    }
}

/// Reports ξ/ξ_max for both modes at the requested amplitudes. Each ceiling
/// is evaluated at the requested amplitude of the opposite mode.
pub fn validate_stability_inputs(d: &DimensionlessParams, xi_m: f64, xi_d: f64) -> MarginReport {
    MarginReport {
        mech: margin(xi_m, collective(d.c0, d.c1, xi_d)),
        atom: margin(xi_d, collective(d.c1, d.c0, xi_m)),
    }
}
