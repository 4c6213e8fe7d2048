#![allow(dead_code)]

use bec_optomech::linear_response::{build_drift, stability_eigen};
use bec_optomech::params::collective_cooperativities;
use bec_optomech::DimensionlessParams;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn log_uniform(r: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    (r.gen_range(lo.ln()..hi.ln())).exp()
}

pub fn params(c0: f64, c1: f64, xi_m: f64, xi_d: f64) -> DimensionlessParams {
    DimensionlessParams {
        c0,
        c1,
        xi_m,
        xi_d,
        kappa: 1e4,
        gamma_d: 1.0,
        n_a: 0.0,
        n_m: 0.0,
        n_d: 0.0,
    }
}

pub fn is_stable(d: &DimensionlessParams) -> bool {
    matches!(stability_eigen(&build_drift(d)), Ok(r) if r.hurwitz)
}

/// Rejection-samples a stable point with modulations below their ceilings.
pub fn stable_draw(r: &mut impl Rng) -> DimensionlessParams {
    loop {
        let mut d = DimensionlessParams {
            c0: log_uniform(r, 0.1, 1e3),
            c1: log_uniform(r, 0.01, 1e2),
            xi_m: 0.0,
            xi_d: 0.0,
            kappa: log_uniform(r, 10.0, 1e4),
            gamma_d: log_uniform(r, 0.1, 10.0),
            n_a: r.gen_range(0.0..5.0),
            n_m: r.gen_range(0.0..100.0),
            n_d: r.gen_range(0.0..100.0),
        };
        let b = collective_cooperativities(&d).unwrap();
        d.xi_m = r.gen_range(0.0..0.9) * b.xi_m_max;
        d.xi_d = r.gen_range(0.0..0.9) * b.xi_d_max;
        if is_stable(&d) {
            return d;
        }
    }
}
