//! Linear quantum-noise response of a red-detuned optomechanical cavity that
//! also holds a BEC, with parametric modulation of both the mirror spring
//! constant and the atomic collision frequency.
//!
//! Everything downstream of [`params`] works in units of the mechanical
//! damping rate (γ_m = 1). The quadrature ordering used throughout is
//! `(X_a, P_a, X_b, P_b, X_d, P_d)`: cavity, mirror, Bogoliubov mode.
//!
//! Module map:
//! - [`params`]: physical and dimensionless parameter sets, collective
//!   cooperativities and modulation ceilings.
//! - [`linear_response`]: drift matrix, eigenvalue stability, susceptibility
//!   (resolvent and closed form), induced optical paramp, steady-state
//!   covariance.
//! - [`amplifier`]: scattering matrix, gains, added noises, amplified spectra.
//! - [`squeezer`]: squeezing spectra, cross correlations, purity and the
//!   asymptotic squeezing limits.
//! - [`bandwidth`]: gain-bandwidth estimates and the numeric FWHM.
//! - [`experiment`]: sweep configuration, figure presets, CSV/JSON output.

pub mod amplifier;
pub mod bandwidth;
pub mod exec;
pub mod experiment;
pub mod linear_response;
pub mod params;
pub mod squeezer;

pub use exec::ExecMode;
pub use params::{DimensionlessParams, PhysicalParams, Rates, StabilityBounds};

/// Complex scalar used for all frequency-domain quantities.
pub type C64 = num_complex::Complex64;
