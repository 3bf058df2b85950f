use criterion::{criterion_group, criterion_main, Criterion};
use qec5::benchmark::{run_error_grid, Pipeline};
use qec5::pauli::PauliString;
use qec5::{Axis, Engine, NoiseSpec, StabilizerCode};
use std::hint::black_box;

fn bench_grid_engines(c: &mut Criterion) {
    let code = StabilizerCode::five_qubit();
    let noise = NoiseSpec::RandomSingleQubit;
    let mut group = c.benchmark_group("error_grid");
    group.sample_size(10);
    for engine in [Engine::Pauli, Engine::Dense] {
        group.bench_function(engine.to_string(), |b| {
            b.iter(|| run_error_grid(black_box(&code), 0.97, &noise, engine, 0).unwrap())
        });
    }
    group.finish();
}

fn bench_single_cell(c: &mut Criterion) {
    let code = StabilizerCode::five_qubit();
    let error: PauliString = PauliString::parse_with_n("+Y3", 5).unwrap();
    let mut group = c.benchmark_group("grid_cell");
    for (name, engine) in [("pauli", Engine::Pauli), ("dense", Engine::Dense)] {
        group.bench_function(name, |b| {
            b.iter(|| {
                let mut pipeline =
                    Pipeline::with_noise_spec(&code, 0.97, &NoiseSpec::Depolarizing { p: 0.1 })
                        .unwrap();
                pipeline.inject(&error).unwrap();
                pipeline.polarization(Axis::Z, engine).unwrap()
            })
        });
    }
    group.finish();
}

fn bench_exhaustive_verification(c: &mut Criterion) {
    let code = StabilizerCode::five_qubit();
    let noise = NoiseSpec::Depolarizing { p: 0.1 };
    c.bench_function("exhaustive_verification_1024", |b| {
        b.iter(|| qec5::benchmark::exhaustive_verification(black_box(&code), 0.97, &noise).unwrap())
    });
}

criterion_group!(
    benches,
    bench_grid_engines,
    bench_single_cell,
    bench_exhaustive_verification
);
criterion_main!(benches);
