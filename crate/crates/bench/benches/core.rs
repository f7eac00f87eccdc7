use criterion::{black_box, criterion_group, criterion_main, Criterion};
use shiftlab_core::{
    build_sequences, BuildParams, ParryMeasure, RunLengths, Sft, Variant,
};

fn bench_count_words(c: &mut Criterion) {
    let gm = Sft::golden_mean();
    c.bench_function("count_words_gm_1000", |b| {
        b.iter(|| black_box(gm.count_words(black_box(1000)).ln))
    });
}

fn bench_cylinder_measure(c: &mut Criterion) {
    let gm = Sft::golden_mean();
    let mu = ParryMeasure::new(&gm).unwrap();
    let w = mu.sample_orbit(1, 512);
    c.bench_function("cylinder_measure_512", |b| {
        b.iter(|| black_box(mu.cylinder_measure(black_box(&w))))
    });
}

fn bench_sample_orbit(c: &mut Criterion) {
    let mu = ParryMeasure::new(&Sft::golden_mean()).unwrap();
    c.bench_function("sample_orbit_100k", |b| {
        b.iter(|| black_box(mu.sample_orbit(black_box(7), 100_000).len()))
    });
}

fn bench_run_lengths(c: &mut Criterion) {
    let mu = ParryMeasure::new(&Sft::golden_mean()).unwrap();
    let w = mu.sample_orbit(3, 100_000);
    c.bench_function("run_lengths_100k", |b| {
        b.iter(|| black_box(RunLengths::compute(black_box(&w)).unwrap().max_n()))
    });
}

fn bench_bridge(c: &mut Criterion) {
    let gm = Sft::golden_mean();
    c.bench_function("bridge_gm", |b| {
        b.iter(|| black_box(gm.bridge(black_box(&[1, 0, 1]), black_box(&[1, 0])).unwrap()))
    });
}

fn bench_build_sequences(c: &mut Criterion) {
    let full = Sft::full_shift(2);
    c.bench_function("build_section4_1e6", |b| {
        b.iter(|| {
            let params = BuildParams::section4(0.25, 1.0, 1_000_000);
            black_box(build_sequences(Variant::Section4, &full, &params).unwrap().depth())
        })
    });
}

criterion_group!(
    benches,
    bench_count_words,
    bench_cylinder_measure,
    bench_sample_orbit,
    bench_run_lengths,
    bench_bridge,
    bench_build_sequences
);
criterion_main!(benches);
