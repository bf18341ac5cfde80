use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use uniseries::analysis::{perturbation_check, verify_series};
use uniseries::config::RunConfig;
use uniseries::schedule::run_forge;
use uniseries::sets::build_cloud;
use uniseries::{CompactSetSpec, Complex64, Exec, TransformSpec, UniversalSeries};

const RUN: &str = r#"
task_budget = 9
density = 32
tol_ladder = [1.0, 0.5, 0.25, 0.125]
[transform]
kind = "cesaro"
[[sets]]
shape = "segment"
z1 = [1.0, 0.0]
z2 = [1.2, 0.0]
[[sets]]
shape = "segment"
z1 = [0.0, 1.0]
z2 = [0.0, 1.2]
[[targets]]
coefficients = [[1.0, 0.0]]
[[targets]]
coefficients = [[0.0, 0.0], [1.0, 0.0]]
[[targets]]
coefficients = [[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]
"#;

fn series() -> UniversalSeries {
    let cfg = RunConfig::from_toml_str(RUN).unwrap();
    run_forge(&cfg.plan(Exec::Sequential).unwrap()).unwrap().series
}

fn modes() -> [(&'static str, Exec); 2] {
    [("sequential", Exec::Sequential), ("parallel", Exec::default())]
}

fn bench_eval(c: &mut Criterion) {
    let annulus = CompactSetSpec::SlitAnnulus { r_in: 0.5, r_out: 2.0, gap_angle: std::f64::consts::PI, gap_half_width: 0.5 };
    let points = build_cloud(&annulus, 64.0).unwrap().validation;
    let coefficients: Vec<Complex64> = (0..200).map(|n| Complex64::new(1.0 / (n as f64 + 1.0), 0.5)).collect();
    let mut group = c.benchmark_group("eval_tn");
    for (name, exec) in modes() {
        group.bench_with_input(BenchmarkId::new(name, points.len()), &exec, |b, &exec| {
            b.iter(|| TransformSpec::Cesaro.eval_tn(black_box(&coefficients), 199, &points, exec).unwrap())
        });
    }
    group.finish();
}

fn bench_verify(c: &mut Criterion) {
    let s = series();
    let mut group = c.benchmark_group("verify_series_x4");
    for (name, exec) in modes() {
        group.bench_function(name, |b| b.iter(|| verify_series(black_box(&s), 4.0, exec).unwrap()));
    }
    group.finish();
}

fn bench_perturbations(c: &mut Criterion) {
    let s = series();
    let last = s.state.ledger.len() - 1;
    let mut group = c.benchmark_group("perturbation_check_100");
    for (name, exec) in modes() {
        group.bench_function(name, |b| b.iter(|| perturbation_check(black_box(&s), last, 100, 7, exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bench_eval, bench_verify, bench_perturbations);
criterion_main!(benches);
