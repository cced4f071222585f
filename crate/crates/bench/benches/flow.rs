use bianchi_bench::representative_states;
use bianchi_core::asymptotics::{classify_sl2r, refine_sl2r_separatrix};
use bianchi_core::{
    analyze_singularity, curvature, flow_rhs, integrate, integrate_envelope, IntegratorConfig,
    MetricState,
};
use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

fn rhs(c: &mut Criterion) {
    let mut group = c.benchmark_group("rhs");
    for (class, state) in representative_states() {
        group.bench_with_input(BenchmarkId::new("flow_rhs", class), &state, |b, s| {
            b.iter(|| flow_rhs(class, black_box(s)))
        });
        group.bench_with_input(BenchmarkId::new("curvature", class), &state, |b, s| {
            b.iter(|| curvature(class, black_box(s)))
        });
    }
    group.finish();
}

fn integration(c: &mut Criterion) {
    let cfg = IntegratorConfig::default();
    let mut group = c.benchmark_group("integrate");
    for (class, state) in representative_states() {
        group.bench_with_input(BenchmarkId::from_parameter(class), &state, |b, s| {
            b.iter(|| integrate(class, black_box(s), &cfg))
        });
    }
    group.finish();
}

fn analysis(c: &mut Criterion) {
    let cfg = IntegratorConfig::default();
    let mut group = c.benchmark_group("analysis");
    for (class, state) in representative_states() {
        let traj = integrate(class, &state, &cfg).unwrap();
        group.bench_with_input(BenchmarkId::new("envelope", class), &traj, |b, t| {
            b.iter(|| integrate_envelope(black_box(t), 1.0, 0.0))
        });
        group.bench_with_input(BenchmarkId::new("singularity", class), &traj, |b, t| {
            b.iter(|| analyze_singularity(black_box(t)))
        });
    }
    group.finish();
}

fn sl2r(c: &mut Criterion) {
    let cfg = IntegratorConfig::default();
    let mut group = c.benchmark_group("sl2r");
    group.bench_function("classify", |b| {
        b.iter(|| classify_sl2r(black_box(&MetricState::initial(0.5, 4.0, 2.0)), &cfg))
    });
    group.sample_size(10);
    group.bench_function("separatrix", |b| {
        let cfg = cfg.with_blowup_threshold(300.0);
        b.iter(|| refine_sl2r_separatrix(1.0, 2.0, 3.0, &cfg))
    });
    group.finish();
}

criterion_group!(benches, rhs, integration, analysis, sl2r);
criterion_main!(benches);
