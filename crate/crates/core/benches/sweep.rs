use bec_optomech::bandwidth::{fwhm_numeric_with, FwhmOptions};
use bec_optomech::experiment::{check_config, load_preset, parse_config, run_sweep};
use bec_optomech::linear_response::Mode;
use bec_optomech::{DimensionlessParams, ExecMode};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, ExecMode); 2] = [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)];

fn spectral_sweep(c: &mut Criterion) {
    let cfg = parse_config(
        r#"
name = "bench"
observables = ["gain:optical", "added_noise:optical", "squeezing:mech", "purity:mech"]
[base]
c1 = 1.0
xi_m = { ratio = 0.9 }
kappa = 1e3
gamma_d = 1.0
n_m = 100.0
[axis]
param = "c0"
start = 1.0
stop = 300.0
points = 32
scale = "log"
[frequency]
start = 0.0
stop = 2e3
points = 256
"#,
    )
    .unwrap();
    let mut g = c.benchmark_group("spectral_sweep_8192_points");
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &m| {
            b.iter(|| run_sweep(&cfg, m).unwrap())
        });
    }
    g.finish();
}

fn preset_check(c: &mut Criterion) {
    let cfg = load_preset("fig3a").unwrap();
    let mut g = c.benchmark_group("check_fig3a");
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &m| {
            b.iter(|| check_config(&cfg, m).unwrap())
        });
    }
    g.finish();
}

fn fwhm_scan(c: &mut Criterion) {
    let mut d = DimensionlessParams::decoupled(1e4, 1.0);
    d.c0 = 100.0;
    d.xi_m = 0.99 * (1.0 + d.c0);
    let mut g = c.benchmark_group("fwhm_4096");
    for (name, mode) in MODES {
        let opts = FwhmOptions { exec: mode, ..FwhmOptions::default() };
        g.bench_with_input(BenchmarkId::from_parameter(name), &opts, |b, o| {
            b.iter(|| fwhm_numeric_with(&d, Mode::Optical, o).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, spectral_sweep, preset_check, fwhm_scan);
criterion_main!(benches);
