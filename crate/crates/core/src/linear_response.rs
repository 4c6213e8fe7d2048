//! Drift matrix, stability, susceptibility and steady-state covariance.
//!
//! Fourier convention: `−iω δu(ω) = A δu(ω) + u_in(ω)`, hence
//! `χ(ω) = (−iωI − A)⁻¹`. The noise vector `u_in` already carries the √rate
//! factors, so `δu = χ u_in` and the scattering matrix is `I − √Γ χ √Γ`.
//!
//! The drift matrix decouples into two 3×3 blocks, `{X_a, P_b, P_d}` and
//! `{P_a, X_b, X_d}`; χ inherits that structure, which is where its 18
//! structural zeros come from.

use nalgebra::{DMatrix, DVector, Matrix6, Schur};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{self, ExecMode};
use crate::params::{validate_stability_inputs, DimensionlessParams};
use crate::C64;

pub const X_A: usize = 0;
pub const P_A: usize = 1;
pub const X_B: usize = 2;
pub const P_B: usize = 3;
pub const X_D: usize = 4;
pub const P_D: usize = 5;

/// Human-readable quadrature names in vector order.
pub const QUADRATURE_NAMES: [&str; 6] = ["X_a", "P_a", "X_b", "P_b", "X_d", "P_d"];

/// One of the three bosonic modes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Optical,
    Mechanical,
    Bogoliubov,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Optical, Mode::Mechanical, Mode::Bogoliubov];

    pub fn x_index(self) -> usize {
        match self {
            Mode::Optical => X_A,
            Mode::Mechanical => X_B,
            Mode::Bogoliubov => X_D,
        }
    }

    pub fn p_index(self) -> usize {
        self.x_index() + 1
    }

    /// Damping rate in units of γ_m.
    pub fn rate(self, d: &DimensionlessParams) -> f64 {
        match self {
            Mode::Optical => d.kappa,
            Mode::Mechanical => 1.0,
            Mode::Bogoliubov => d.gamma_d,
        }
    }

    pub fn occupancy(self, d: &DimensionlessParams) -> f64 {
        match self {
            Mode::Optical => d.n_a,
            Mode::Mechanical => d.n_m,
            Mode::Bogoliubov => d.n_d,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Optical => "optical",
            Mode::Mechanical => "mech",
            Mode::Bogoliubov => "bog",
        }
    }
}

/// Block membership of each quadrature: 0 for `{X_a, P_b, P_d}`,
/// 1 for `{P_a, X_b, X_d}`.
const BLOCK: [u8; 6] = [0, 1, 1, 0, 1, 0];

/// True when χ_ij (and s_ij) is structurally nonzero.
pub fn coupled(i: usize, j: usize) -> bool {
    BLOCK[i] == BLOCK[j]
}

/// Nonzero layout of the drift matrix (row-major).
pub const DRIFT_PATTERN: [[bool; 6]; 6] = [
    [true, false, false, true, false, true],
    [false, true, true, false, true, false],
    [false, true, true, false, false, false],
    [true, false, false, true, false, false],
    [false, true, false, false, true, false],
    [true, false, false, false, false, true],
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ResponseError {
    #[error("susceptibility has a pole at ω = {omega}")]
    Pole { omega: f64 },
    #[error("eigenvalue solver did not converge for drift matrix {matrix}")]
    Eigen { matrix: String },
    #[error("drift matrix is not Hurwitz (max Re λ = {max_real_part}); no steady state")]
    NoSteadyState { max_real_part: f64 },
    #[error("Lyapunov system is singular")]
    SingularLyapunov,
}

/// The 6×6 real drift matrix, in units of γ_m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix(pub Matrix6<f64>);

impl DriftMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }
}

pub fn build_drift(d: &DimensionlessParams) -> DriftMatrix {
    let g = d.g_om();
    let big_g = d.g_atom();
    let lm = d.lambda_m();
    let ld = d.lambda_d();
    let half_k = d.kappa / 2.0;
    let half_gm = 0.5;
    let half_gd = d.gamma_d / 2.0;

    let mut a = Matrix6::zeros();
    a[(X_A, X_A)] = -half_k;
    a[(X_A, P_B)] = -g;
    a[(X_A, P_D)] = big_g;
    a[(P_A, P_A)] = -half_k;
    a[(P_A, X_B)] = g;
    a[(P_A, X_D)] = -big_g;
    a[(X_B, P_A)] = -g;
    a[(X_B, X_B)] = lm - half_gm;
    a[(P_B, X_A)] = g;
    a[(P_B, P_B)] = -(lm + half_gm);
    a[(X_D, P_A)] = big_g;
    a[(X_D, X_D)] = ld - half_gd;
    a[(P_D, X_A)] = -big_g;
    a[(P_D, P_D)] = -(ld + half_gd);
    DriftMatrix(a)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    /// (re, im) pairs.
    pub eigenvalues: Vec<(f64, f64)>,
    pub max_real_part: f64,
    pub hurwitz: bool,
    /// 1 − ξ_m/ξ_m_max against the collective-cooperativity ceiling, when a
    /// parameter set was supplied.
    pub margin_to_bound: Option<f64>,
}

const SCHUR_MAX_ITER: usize = 10_000;

pub fn stability_eigen(a: &DriftMatrix) -> Result<StabilityReport, ResponseError> {
    let schur = Schur::try_new(a.0, f64::EPSILON, SCHUR_MAX_ITER).ok_or_else(|| {
        ResponseError::Eigen {
            matrix: format!("{:?}", a.0.as_slice()),
        }
    })?;
    let eig = schur.complex_eigenvalues();
    let eigenvalues: Vec<(f64, f64)> = eig.iter().map(|z| (z.re, z.im)).collect();
    let max_real_part = eig.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    Ok(StabilityReport {
        eigenvalues,
        max_real_part,
        hurwitz: max_real_part < 0.0,
        margin_to_bound: None,
    })
}

/// Eigen-analysis of the drift matrix plus the margin to the ξ_m ceiling.
pub fn analyze_stability(d: &DimensionlessParams) -> Result<StabilityReport, ResponseError> {
    let mut report = stability_eigen(&build_drift(d))?;
    let margin = validate_stability_inputs(d, d.xi_m, d.xi_d).mech.margin;
    report.margin_to_bound = margin.is_finite().then_some(margin);
    Ok(report)
}

/// Smallest ξ_m (at fixed ξ_d and everything else) where the drift matrix
/// stops being Hurwitz, located by bisection on max Re λ(A) to relative
/// tolerance `rel_tol`. `None` when already unstable at ξ_m = 0 or no onset
/// is found below ξ_m = 1e12.
pub fn instability_onset_xi_m(d: &DimensionlessParams, rel_tol: f64) -> Option<f64> {
    let unstable = |xi: f64| {
        stability_eigen(&build_drift(&d.with_xi(xi, d.xi_d)))
            .map(|r| !r.hurwitz)
            .unwrap_or(true)
    };
    if unstable(0.0) {
        return None;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while !unstable(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return None;
        }
    }
    while hi - lo > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if unstable(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// χ(ω): 6×6 complex susceptibility at a single frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SusceptibilityMatrix {
    pub omega: f64,
    pub entries: Matrix6<C64>,
}

impl SusceptibilityMatrix {
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.entries[(i, j)]
    }
}

fn all_finite(m: &Matrix6<C64>) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Resolvent route: `(−iωI − A)⁻¹` by LU.
pub fn susceptibility_numeric(
    a: &DriftMatrix,
    omega: f64,
) -> Result<SusceptibilityMatrix, ResponseError> {
    let m: Matrix6<C64> = Matrix6::from_diagonal_element(C64::new(0.0, -omega))
        - a.0.map(|x| C64::new(x, 0.0));
    match m.try_inverse() {
        Some(inv) if all_finite(&inv) => Ok(SusceptibilityMatrix {
            omega,
            entries: inv,
        }),
        _ => Err(ResponseError::Pole { omega }),
    }
}

/// Evaluates the resolvent on a frequency grid.
pub fn susceptibility_grid(
    a: &DriftMatrix,
    omegas: &[f64],
    mode: ExecMode,
) -> Vec<Result<SusceptibilityMatrix, ResponseError>> {
    exec::map(mode, omegas, |&w| susceptibility_numeric(a, w))
}

fn recip(z: C64, omega: f64) -> Result<C64, ResponseError> {
    if z == C64::new(0.0, 0.0) {
        return Err(ResponseError::Pole { omega });
    }
    let r = z.inv();
    if r.re.is_finite() && r.im.is_finite() {
        Ok(r)
    } else {
        Err(ResponseError::Pole { omega })
    }
}

/// Closed-form route: the 18 nonzero elements written out from the bare
/// susceptibilities χ₀⁻¹ = κ/2 − iω, χ_{±m}⁻¹ = γ_m/2 ± λ_m − iω,
/// χ_{±d}⁻¹ = γ_d/2 ± λ_d − iω.
pub fn susceptibility_closed(
    d: &DimensionlessParams,
    omega: f64,
) -> Result<SusceptibilityMatrix, ResponseError> {
    let iw = C64::new(0.0, omega);
    let g = d.g_om();
    let big_g = d.g_atom();
    let g2 = g * g;
    let big_g2 = big_g * big_g;
    let lm = d.lambda_m();
    let ld = d.lambda_d();

    let c0_inv = C64::from(d.kappa / 2.0) - iw;
    let cpm_inv = C64::from(0.5 + lm) - iw;
    let cmm_inv = C64::from(0.5 - lm) - iw;
    let cpd_inv = C64::from(d.gamma_d / 2.0 + ld) - iw;
    let cmd_inv = C64::from(d.gamma_d / 2.0 - ld) - iw;

    let c0 = recip(c0_inv, omega)?;
    let cpm = recip(cpm_inv, omega)?;
    let cmm = recip(cmm_inv, omega)?;
    let cpd = recip(cpd_inv, omega)?;
    let cmd = recip(cmd_inv, omega)?;

    let r = |z: C64| recip(z, omega);

    let mut x = Matrix6::zeros();
    // {X_a, P_b, P_d} block: "+" susceptibilities.
    x[(X_A, X_A)] = r(c0_inv + cpm * g2 + cpd * big_g2)?;
    let den_14 = r(c0_inv * cpm_inv + g2 + cpd * cpm_inv * big_g2)?;
    x[(X_A, P_B)] = den_14 * (-g);
    x[(P_B, X_A)] = den_14 * g;
    let den_16 = r(c0_inv * cpd_inv + big_g2 + cpm * cpd_inv * g2)?;
    x[(X_A, P_D)] = den_16 * big_g;
    x[(P_D, X_A)] = den_16 * (-big_g);
    x[(P_B, P_B)] = (C64::from(1.0) + c0 * cpd * big_g2)
        * r(cpm_inv + c0 * g2 + c0 * cpd * cpm_inv * big_g2)?;
    let den_46 = r(c0_inv * cpm_inv * cpd_inv + cpm_inv * big_g2 + cpd_inv * g2)?;
    x[(P_B, P_D)] = den_46 * (g * big_g);
    x[(P_D, P_B)] = den_46 * (g * big_g);
    x[(P_D, P_D)] =
        (C64::from(1.0) + c0 * cpm * g2) * r(cpd_inv + c0 * big_g2 + c0 * cpm * cpd_inv * g2)?;

    // {P_a, X_b, X_d} block: "−" susceptibilities.
    x[(P_A, P_A)] = r(c0_inv + cmm * g2 + cmd * big_g2)?;
    let den_23 = r(c0_inv * cmm_inv + g2 + cmd * cmm_inv * big_g2)?;
    x[(P_A, X_B)] = den_23 * g;
    x[(X_B, P_A)] = den_23 * (-g);
    let den_25 = r(c0_inv * cmd_inv + big_g2 + cmm * cmd_inv * g2)?;
    x[(P_A, X_D)] = den_25 * (-big_g);
    x[(X_D, P_A)] = den_25 * big_g;
    x[(X_B, X_B)] = (C64::from(1.0) + c0 * cmd * big_g2)
        * r(cmm_inv + c0 * g2 + c0 * cmd * cmm_inv * big_g2)?;
    let den_35 = r(c0_inv * cmm_inv * cmd_inv + cmm_inv * big_g2 + cmd_inv * g2)?;
    x[(X_B, X_D)] = den_35 * (g * big_g);
    x[(X_D, X_B)] = den_35 * (g * big_g);
    x[(X_D, X_D)] =
        (C64::from(1.0) + c0 * cmm * g2) * r(cmd_inv + c0 * big_g2 + c0 * cmm * cmd_inv * g2)?;

    if !all_finite(&x) {
        return Err(ResponseError::Pole { omega });
    }
    Ok(SusceptibilityMatrix { omega, entries: x })
}

/// Frequency-dependent paramp coefficient the modulated mirror and condensate
/// induce on the cavity field, λ̃_a(ω).
pub fn induced_paramp_a(d: &DimensionlessParams, omega: f64) -> Result<C64, ResponseError> {
    let iw = C64::new(0.0, omega);
    let lm = d.lambda_m();
    let ld = d.lambda_d();
    let g2 = d.g_om().powi(2);
    let big_g2 = d.g_atom().powi(2);
    let den_m = (C64::from(0.5) - iw).powi(2) - lm * lm;
    let den_d = (C64::from(d.gamma_d / 2.0) - iw).powi(2) - ld * ld;
    let term = |num: f64, den: C64| -> Result<C64, ResponseError> {
        if num == 0.0 {
            return Ok(C64::new(0.0, 0.0));
        }
        Ok(recip(den, omega)? * num)
    };
    Ok(term(g2 * lm, den_m)? + term(big_g2 * ld, den_d)?)
}

/// Symmetrized input-noise diffusion matrix,
/// `diag(κ(n̄_a+½), κ(n̄_a+½), γ_m(n̄_m+½), …)`.
pub fn diffusion(d: &DimensionlessParams) -> Matrix6<f64> {
    let rates = d.rates();
    let occ = [d.n_a, d.n_a, d.n_m, d.n_m, d.n_d, d.n_d];
    Matrix6::from_fn(|i, j| {
        if i == j {
            rates.for_quadrature(i) * (occ[i] + 0.5)
        } else {
            0.0
        }
    })
}

/// Steady-state symmetrized covariance matrix V.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix(pub Matrix6<f64>);

impl CovarianceMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    /// Smallest eigenvalue of the Hermitian matrix V + (i/2)Ω.
    pub fn min_uncertainty_eigenvalue(&self) -> f64 {
        let mut h: Matrix6<C64> = self.0.map(|x| C64::new(x, 0.0));
        for k in 0..3 {
            let (x, p) = (2 * k, 2 * k + 1);
            h[(x, p)] += C64::new(0.0, 0.5);
            h[(p, x)] -= C64::new(0.0, 0.5);
        }
        h.symmetric_eigenvalues().min()
    }

    /// Robertson–Schrödinger check V + (i/2)Ω ≥ 0 up to `tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        self.min_uncertainty_eigenvalue() >= -tol
    }
}

/// Solves `A V + V Aᵀ + D = 0` by vectorizing to a 36×36 linear system.
pub fn steady_state_covariance(
    a: &DriftMatrix,
    d: &DimensionlessParams,
) -> Result<CovarianceMatrix, ResponseError> {
    let report = stability_eigen(a)?;
    if !report.hurwitz {
        return Err(ResponseError::NoSteadyState {
            max_real_part: report.max_real_part,
        });
    }
    const N: usize = 6;
    // Column-major vec: vec(AV) = (I⊗A) vec V, vec(VAᵀ) = (A⊗I) vec V.
    let mut k = DMatrix::<f64>::zeros(N * N, N * N);
    for col in 0..N {
        for row in 0..N {
            let r = col * N + row;
            for m in 0..N {
                k[(r, col * N + m)] += a.0[(row, m)];
                k[(r, m * N + row)] += a.0[(col, m)];
            }
        }
    }
    let diff = diffusion(d);
    let rhs = DVector::from_fn(N * N, |r, _| -diff[(r % N, r / N)]);
    let sol = k.lu().solve(&rhs).ok_or(ResponseError::SingularLyapunov)?;
    let v = Matrix6::from_fn(|i, j| sol[j * N + i]);
    Ok(CovarianceMatrix((v + v.transpose()) * 0.5))
}
