//! Benchmarks for the hot simulation kernels: mode solving, charge-basis
//! diagonalization, the Lindblad steady state, map columns and the
//! Levenberg-Marquardt Lorentzian fit.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use num_complex::Complex64;
use std::hint::black_box;

use qad_core::config::ExperimentConfig;
use qad_core::device::{cavity_modes, mirror_reflection, stopband_interval};
use qad_core::fitting::fit_lorentzian;
use qad_core::grid::linspace;
use qad_core::jc::JcParams;
use qad_core::response::{
    anticrossing_map, lindblad_transmission_unchecked, linear_transmission, DecoherenceParams,
    DriveParams, TransmissionTrace,
};
use qad_core::transmon::{charge_basis_spectrum, TransmonParams};

fn bench_mirror_reflection(c: &mut Criterion) {
    let cfg = ExperimentConfig::default();
    let material = cfg.material().unwrap();
    let cavity = cfg.cavity().unwrap();
    c.bench_function("mirror_reflection_200_strips", |b| {
        b.iter(|| mirror_reflection(&cavity.left_mirror, &material, black_box(3.2245e9)).unwrap())
    });
}

fn bench_cavity_modes(c: &mut Criterion) {
    let cfg = ExperimentConfig::default();
    let material = cfg.material().unwrap();
    let cavity = cfg.cavity().unwrap();
    let band = stopband_interval(&cavity.left_mirror, &material, 0.5).unwrap();
    c.bench_function("cavity_modes_stopband", |b| {
        b.iter(|| cavity_modes(&cavity, &material, black_box(band)).unwrap())
    });
}

fn bench_charge_basis(c: &mut Criterion) {
    let mut group = c.benchmark_group("charge_basis_spectrum");
    for cutoff in [15usize, 30] {
        let params = TransmonParams::new(0.21e9, 17.4e9, 0.0, cutoff).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(cutoff), &params, |b, p| {
            b.iter(|| charge_basis_spectrum(p, black_box(p.ej0)).unwrap())
        });
    }
    group.finish();
}

fn bench_lindblad(c: &mut Criterion) {
    let dec = DecoherenceParams::new(0.332e6, 10e6, 0.0).unwrap();
    let mut group = c.benchmark_group("lindblad_steady_state");
    group.sample_size(20);
    for n_max in [4usize, 6, 8] {
        let params = JcParams::new(3.176e9, 3.176e9, 13e6, n_max, 2).unwrap();
        let drv = DriveParams::new(0.05 * dec.kappa, 0.0, 3.176e9 + 5e6, None).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n_max), &params, |b, p| {
            b.iter(|| {
                lindblad_transmission_unchecked(p, &p.two_level_ladder(), &dec, &drv).unwrap()
            })
        });
    }
    group.finish();
}

fn bench_anticrossing_map(c: &mut Criterion) {
    let cfg = ExperimentConfig::default();
    let sys = cfg.system().unwrap();
    let dec = cfg.decoherence().unwrap();
    let flux = linspace(0.365, 0.378, 21);
    let f = linspace(3.136e9, 3.216e9, 201);
    let mut group = c.benchmark_group("anticrossing_map");
    group.sample_size(20);
    group.bench_function("21x201", |b| {
        b.iter(|| anticrossing_map(&sys, &dec, black_box(&flux), black_box(&f)).unwrap())
    });
    group.finish();
}

fn bench_lorentzian_fit(c: &mut Criterion) {
    let dec = DecoherenceParams::new(0.332e6, 10e6, 0.0).unwrap();
    let f = linspace(3.176e9 - 2e6, 3.176e9 + 2e6, 401);
    let t: Vec<Complex64> = f
        .iter()
        .map(|&fi| linear_transmission(fi, 3.176e9, 3.0e9, 0.0, &dec))
        .collect();
    let trace = TransmissionTrace::new(f, t).unwrap();
    c.bench_function("fit_lorentzian_401_points", |b| {
        b.iter(|| fit_lorentzian(black_box(&trace), None).unwrap())
    });
}

criterion_group!(
    benches,
    bench_mirror_reflection,
    bench_cavity_modes,
    bench_charge_basis,
    bench_lindblad,
    bench_anticrossing_map,
    bench_lorentzian_fit
);
criterion_main!(benches);
