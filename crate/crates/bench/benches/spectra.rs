use criterion::{black_box, criterion_group, criterion_main, Criterion};
use euph_core::oracle::{fd_spectrum, GridSpec};
use euph_core::spectra::{energy, energy_via_nu, make_tables};
use euph_core::wavefunctions::build_state;
use euph_core::{DeformationModel, QuantumNumbers};

fn closed_forms(c: &mut Criterion) {
    let m = DeformationModel::anti_de_sitter(0.01).unwrap();
    let q = QuantumNumbers::nl(3, 1).unwrap();
    c.bench_function("energy", |b| b.iter(|| energy(black_box(&m), black_box(q))));
    c.bench_function("tables_n5", |b| b.iter(|| make_tables(black_box(5)).unwrap()));
}

fn nu_quantization(c: &mut Criterion) {
    let ds = DeformationModel::de_sitter(0.01).unwrap();
    let ads = DeformationModel::anti_de_sitter(0.01).unwrap();
    let q = QuantumNumbers::nl(3, 0).unwrap();
    c.bench_function("energy_via_nu_ds", |b| {
        b.iter(|| energy_via_nu(&ds, black_box(q)).unwrap())
    });
    c.bench_function("energy_via_nu_ads", |b| {
        b.iter(|| energy_via_nu(&ads, black_box(q)).unwrap())
    });
}

fn states(c: &mut Criterion) {
    let m = DeformationModel::anti_de_sitter(0.01).unwrap();
    let q = QuantumNumbers::nl(3, 0).unwrap();
    c.bench_function("build_state_ads_3s", |b| {
        b.iter(|| build_state(&m, black_box(q)).unwrap())
    });
}

fn oracle(c: &mut Criterion) {
    let m = DeformationModel::anti_de_sitter(0.01).unwrap();
    let grid = GridSpec::default_for(&m, 3);
    let mut group = c.benchmark_group("oracle");
    group.sample_size(10);
    group.bench_function("fd_spectrum_ads_l0", |b| {
        b.iter(|| fd_spectrum(&m, 0, 3, grid).unwrap())
    });
    group.finish();
}

criterion_group!(benches, closed_forms, nu_quantization, states, oracle);
criterion_main!(benches);
