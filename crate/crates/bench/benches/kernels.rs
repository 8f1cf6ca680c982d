//! Timings for the hot paths: exact count recurrences, trinomial tables,
//! lattice enumeration, eigenvalue-bound sweeps, spectral sums, and the
//! Monte Carlo engine.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use nbwalk_core::budget::Budgets;
use nbwalk_core::chebyshev::bound_sweep;
use nbwalk_core::combinatorics::trinomial_table;
use nbwalk_core::graph::{FiniteGraph, TorusSpec};
use nbwalk_core::lattice::{lattice_dp_oracle, nb_closed_counts_zd, nb_return_series};
use nbwalk_core::nb_matrix::nb_counts;
use nbwalk_core::sim::{simulate_walks, SimConfig, SimTarget};
use nbwalk_core::spectrum::{spectral_return_probs, torus_spectrum};
use std::hint::black_box;

fn bench_counts(c: &mut Criterion) {
    let budgets = Budgets::default();
    let torus = FiniteGraph::torus(TorusSpec::new(5, 2).unwrap(), &budgets).unwrap();
    c.bench_function("nb_counts torus(5,2) k=8", |b| {
        b.iter(|| nb_counts(black_box(&torus), black_box(8), &budgets).unwrap())
    });
}

fn bench_trinomial(c: &mut Criterion) {
    c.bench_function("trinomial_table n=256", |b| {
        b.iter(|| trinomial_table(black_box(256)))
    });
    c.bench_function("z3 closed counts n=64", |b| {
        b.iter(|| nb_closed_counts_zd(black_box(3), black_box(64)).unwrap())
    });
}

fn bench_series(c: &mut Criterion) {
    let budgets = Budgets::default();
    c.bench_function("nb_return_series d=2 k=512", |b| {
        b.iter(|| nb_return_series(black_box(2), black_box(512), &budgets).unwrap())
    });
}

fn bench_dp(c: &mut Criterion) {
    let budgets = Budgets::default();
    c.bench_function("lattice_dp d=2 k=32", |b| {
        b.iter(|| lattice_dp_oracle(black_box(2), black_box(32), true, &budgets).unwrap())
    });
}

fn bench_bound_sweep(c: &mut Criterion) {
    c.bench_function("bound_sweep r=4 k=100 grid=1000", |b| {
        b.iter(|| bound_sweep(black_box(4), black_box(100), black_box(1000), 2.0).unwrap())
    });
}

fn bench_spectral(c: &mut Criterion) {
    let budgets = Budgets::default();
    c.bench_function("spectral torus(31,2) k=32", |b| {
        b.iter_batched(
            || torus_spectrum(TorusSpec::new(31, 2).unwrap(), &budgets).unwrap(),
            |spec| spectral_return_probs(&spec, black_box(32), &budgets).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn bench_simulate(c: &mut Criterion) {
    c.bench_function("simulate nb d=2 1e5 trials 16 steps", |b| {
        b.iter(|| {
            let cfg = SimConfig {
                walk: nbwalk_core::lattice::WalkKind::NonBacktracking,
                target: SimTarget::Lattice { dim: 2 },
                trials: 100_000,
                max_steps: 16,
                seed: 0xBEEF,
            };
            simulate_walks(black_box(&cfg)).unwrap()
        })
    });
}

criterion_group! {
    name = kernels;
    config = Criterion::default().sample_size(10);
    targets = bench_counts, bench_trinomial, bench_series, bench_dp,
              bench_bound_sweep, bench_spectral, bench_simulate
}
criterion_main!(kernels);
