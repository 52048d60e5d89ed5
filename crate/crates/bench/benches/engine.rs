use apollonius_bench::{four_real, irrational_radii, worked, worked_mod};
use apollonius_core::duality::thetas;
use apollonius_core::localindex::beta_sum;
use apollonius_core::oracle;
use apollonius_core::solver::{choose_radii, solve_all};
use apollonius_core::zerodim::{analyze, GlobalForm, PointMode};
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn solving(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_all");
    for (name, cfg) in [("worked", worked()), ("irrational_radii", irrational_radii())] {
        let radii = choose_radii(&cfg, [1, 1, 1]).unwrap();
        g.bench_function(name, |b| b.iter(|| solve_all(black_box(&cfg), &radii).unwrap()));
    }
    g.finish();
}

fn indices(c: &mut Criterion) {
    let cfg = four_real();
    let sols = solve_all(&cfg, &choose_radii(&cfg, [1, 1, 1]).unwrap()).unwrap();
    c.bench_function("beta_sum/four_real", |b| b.iter(|| beta_sum(black_box(&cfg), &sols).unwrap()));
    c.bench_function("analyze/four_real", |b| b.iter(|| analyze(black_box(&cfg), PointMode::Plane, GlobalForm::Trace).unwrap()));
}

fn duality(c: &mut Criterion) {
    let cfg = worked();
    let radii = choose_radii(&cfg, [1, 1, 1]).unwrap();
    c.bench_function("thetas/worked", |b| b.iter(|| thetas(black_box(&cfg), &radii).unwrap()));
}

fn enumeration(c: &mut Criterion) {
    let cfg = worked_mod(17);
    c.bench_function("oracle_enumerate/p17", |b| b.iter(|| oracle::enumerate(black_box(&cfg), false).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = solving, indices, duality, enumeration
}
criterion_main!(benches);
