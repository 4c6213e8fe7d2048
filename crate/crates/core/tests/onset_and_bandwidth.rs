//! Where the simple ceilings do hold, and what the true onset is where they do not.

mod common;

use bec_optomech::amplifier::gain_on_resonance;
use bec_optomech::bandwidth::{fwhm_numeric, gain_bandwidth_analytic};
use bec_optomech::linear_response::{instability_onset_xi_m, Mode};
use bec_optomech::params::collective_cooperativities;
use common::{log_uniform, params, rng};

#[test]
fn onset_matches_ceiling_without_atomic_drive() {
    let mut r = rng(30);
    for _ in 0..20 {
        let d = params(log_uniform(&mut r, 1.0, 1e3), log_uniform(&mut r, 0.01, 1e2), 0.0, 0.0);
        let bound = collective_cooperativities(&d).unwrap().xi_m_max;
        let onset = instability_onset_xi_m(&d, 1e-10).unwrap();
        assert!(((onset - bound) / bound).abs() < 1e-6, "{d:?}: {onset} vs {bound}");
    }
}

#[test]
fn onset_with_atomic_drive_is_the_real_axis_crossing() {
    // det A = 0 at xi_m = 1 + C0 (1 - xi_d) / (1 + C1 - xi_d), below 1 + C_m.
    let mut r = rng(31);
    for _ in 0..20 {
        let mut d = params(log_uniform(&mut r, 1.0, 1e3), log_uniform(&mut r, 0.01, 1e2), 0.0, 0.0);
        d.xi_d = 0.5 * collective_cooperativities(&d).unwrap().xi_d_max;
        let crossing = 1.0 + d.c0 * (1.0 - d.xi_d) / (1.0 + d.c1 - d.xi_d);
        let onset = instability_onset_xi_m(&d, 1e-10).unwrap();
        assert!(((onset - crossing) / crossing).abs() < 1e-6, "{d:?}: {onset} vs {crossing}");
        assert!(onset <= collective_cooperativities(&d).unwrap().xi_m_max);
    }
}

#[test]
fn bare_cavity_gain_bandwidth_product() {
    // C1 = 0, gamma_d -> 0, large gain: width * sqrt(G) -> 8 g^2 / kappa = 2 C0.
    for c0 in [10.0, 30.0, 100.0] {
        let mut d = params(c0, 0.0, 0.0, 0.0);
        d.gamma_d = 1e-6;
        d.xi_m = 0.999 * collective_cooperativities(&d).unwrap().xi_m_max;
        let est = gain_bandwidth_analytic(&d).unwrap();
        let numeric = fwhm_numeric(&d, Mode::Optical).unwrap();
        let sqrt_g = gain_on_resonance(&d).optical.gain().value().unwrap().sqrt();
        let product = numeric * sqrt_g;
        assert!((product - 2.0 * c0).abs() / (2.0 * c0) < 0.15, "C0={c0}: {product}");
        assert!((est.weak_coupling - numeric).abs() / numeric < 0.15, "C0={c0}: {} vs {numeric}", est.weak_coupling);
    }
}
