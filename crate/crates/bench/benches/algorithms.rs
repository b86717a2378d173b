use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use ropack::analysis::{optimize_params, p_first_exact, Problem};
use ropack::online::{GapRunner, KnapsackRunner};
use ropack::oracles::{gap_opt_fractional, knapsack_opt_integral, max_weight_matching, SolverCaps};
use ropack::perm::{coin_rng, random_permutation};
use ropack::simulator::{matching_table, FamilyKind};
use ropack_bench::{gap, knapsack, params, SEED};

fn online(c: &mut Criterion) {
    let inst = knapsack(FamilyKind::Mixed, 2000);
    let p = params(2000, false);
    let runner = KnapsackRunner::new(&inst, p.delta()).unwrap();
    let mut t = 0u64;
    c.bench_function("knapsack sequential n=2000", |b| {
        b.iter(|| {
            t += 1;
            let perm = random_permutation(2000, SEED, t).unwrap();
            black_box(runner.run_sequential(&perm, &p, &mut coin_rng(SEED, t)).unwrap())
        })
    });

    let inst = gap(FamilyKind::GapUniform, 300, 3);
    let p = params(300, true);
    let runner = GapRunner::new(&inst, p.delta()).unwrap();
    c.bench_function("gap sequential n=300 m=3", |b| {
        b.iter(|| {
            t += 1;
            let perm = random_permutation(300, SEED, t).unwrap();
            black_box(runner.run_sequential(&perm, &p, &mut coin_rng(SEED, t)).unwrap())
        })
    });

    let table = matching_table(200, 10, SEED).unwrap();
    let p = params(200, true);
    let runner = GapRunner::new(&table, p.delta()).unwrap();
    c.bench_function("matching rule n=200 m=10", |b| {
        b.iter(|| {
            t += 1;
            let perm = random_permutation(200, SEED, t).unwrap();
            black_box(runner.run_large(&perm, &p).unwrap())
        })
    });
}

fn oracles(c: &mut Criterion) {
    let inst = knapsack(FamilyKind::Correlated, 30);
    c.bench_function("branch and bound n=30", |b| {
        b.iter(|| black_box(knapsack_opt_integral(&inst, &SolverCaps::default()).unwrap()))
    });

    let inst = gap(FamilyKind::GapSkewed, 200, 4);
    c.bench_function("gap relaxation n=200 m=4", |b| {
        b.iter(|| black_box(gap_opt_fractional(&inst)))
    });

    let weights: Vec<Vec<i128>> = (0..200)
        .map(|i| (0..20).map(|j| ((i * 37 + j * 101) % 997) as i128).collect())
        .collect();
    c.bench_function("hungarian 200x20", |b| {
        b.iter(|| black_box(max_weight_matching(&weights)))
    });
}

fn analysis(c: &mut Criterion) {
    c.bench_function("exact first-acceptance n=500", |b| {
        b.iter(|| black_box(p_first_exact(500, 211, 322, 3).unwrap()))
    });
    c.bench_function("optimize knapsack parameters", |b| {
        b.iter(|| black_box(optimize_params(Problem::Knapsack, 1e-3).unwrap()))
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = online, oracles, analysis
}
criterion_main!(benches);
