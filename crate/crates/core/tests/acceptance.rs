//! Acceptance gate: every deliverable claim of the library, checked at its
//! stated tolerance. One test per criterion; each prints a single
//! `criterion NN <name>: PASS` line when it holds (visible with
//! `cargo test --test acceptance -- --nocapture`).

use nbwalk_core::budget::Budgets;
use nbwalk_core::chebyshev;
use nbwalk_core::combinatorics::{bigint_ratio_to_f64, BinomialTable};
use nbwalk_core::graph::{FiniteGraph, TorusSpec};
use nbwalk_core::lattice::{self, WalkKind};
use nbwalk_core::nb_matrix;
use nbwalk_core::sim::{simulate_walks, SimConfig, SimTarget};
use nbwalk_core::spectrum;
use nbwalk_core::verify;
use nbwalk_core::BigRatio;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn budgets() -> Budgets {
    Budgets::default()
}

fn assert_all(results: &[verify::CheckResult]) {
    for r in results {
        assert!(r.pass, "{}: {}", r.name, r.detail);
    }
}

/// Deterministic small random graph with bounded degree (keeps the
/// depth-first oracle inside its work budget) — scans seeds from `seed0`.
fn bounded_random_graph(n: usize, p: f64, max_deg: usize, seed0: u64) -> FiniteGraph {
    for seed in seed0.. {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.gen_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = FiniteGraph::from_edges(n, &edges).expect("valid edges");
        let deg_ok = (0..n).all(|v| g.degree(v) <= max_deg);
        if deg_ok && g.is_connected() {
            return g;
        }
    }
    unreachable!("seed scan always terminates");
}

#[test]
fn criterion_01_z2_closed_forms() {
    let b = budgets();
    let table = BinomialTable::with_rows(32);
    for n in 1..=16usize {
        let direct = lattice::nb_closed_count_z2_sum(n, &table);
        let reindexed = lattice::nb_closed_count_z2_reindexed(n, &table);
        let trinomial = BigInt::from(lattice::nb_closed_count_z2_trinomial(n));
        assert_eq!(direct, reindexed, "n={n}");
        assert_eq!(direct, trinomial, "n={n}");
        let dp = BigInt::from(lattice::lattice_dp_oracle(2, 2 * n, true, &b).unwrap());
        assert_eq!(dp, trinomial, "dp disagrees at n={n}");
    }
    let first: Vec<BigInt> = (1..=3)
        .map(|n| BigInt::from(lattice::nb_closed_count_z2_trinomial(n)))
        .collect();
    assert_eq!(
        first,
        vec![BigInt::from(0), BigInt::from(8), BigInt::from(40)]
    );
    println!("criterion 01 z2-closed-forms: PASS");
}

#[test]
fn criterion_02_alternating_sum_identity() {
    assert_all(&verify::suite_sun(200));
    println!("criterion 02 alternating-sum-identity: PASS");
}

#[test]
fn criterion_03_count_matrix_routes() {
    let b = budgets();
    let battery: Vec<(&str, FiniteGraph)> = vec![
        ("cycle-3", FiniteGraph::cycle(3, &b).unwrap()),
        ("cycle-5", FiniteGraph::cycle(5, &b).unwrap()),
        ("complete-4", FiniteGraph::complete(4, &b).unwrap()),
        ("complete-5", FiniteGraph::complete(5, &b).unwrap()),
        (
            "torus-5x5",
            FiniteGraph::torus(TorusSpec::new(5, 2).unwrap(), &b).unwrap(),
        ),
        ("random-10", bounded_random_graph(10, 0.4, 6, 0xBEE1)),
        ("random-8", bounded_random_graph(8, 0.5, 6, 0xBEE2)),
    ];
    let k_max = 10usize;
    for (name, g) in &battery {
        let rec = nb_matrix::nb_counts(g, k_max, &b).unwrap();
        let gen = nb_matrix::gen_func_counts(g, k_max, &b).unwrap();
        let dfs = nb_matrix::nb_counts_oracle_matrices(g, k_max, &b).unwrap();
        for k in 0..=k_max {
            assert_eq!(rec[k].entries, gen[k].entries, "{name} genfunc k={k}");
            assert_eq!(rec[k].entries, dfs[k].entries, "{name} dfs k={k}");
        }
        if g.regular_degree().is_some_and(|r| r >= 2) {
            for m in &rec {
                let closed = nb_matrix::nb_counts_regular_closed_form(g, m.step, &b).unwrap();
                assert_eq!(m.entries, closed.entries, "{name} closed k={}", m.step);
            }
        }
    }
    println!("criterion 03 count-matrix-routes: PASS");
}

#[test]
fn criterion_04_torus_diagonal_is_lattice_count() {
    let b = budgets();
    let g = FiniteGraph::torus(TorusSpec::new(11, 2).unwrap(), &b).unwrap();
    let counts = nb_matrix::nb_counts(&g, 10, &b).unwrap();
    let expect = [0u64, 8, 40, 312, 2240];
    for (i, &e) in expect.iter().enumerate() {
        let k = i + 1;
        let diag = counts[2 * k].entries.get(0, 0).clone();
        assert_eq!(diag, BigInt::from(e), "length {}", 2 * k);
        assert_eq!(
            diag,
            BigInt::from(lattice::nb_closed_count_z2_trinomial(k)),
            "closed form at length {}",
            2 * k
        );
    }
    println!("criterion 04 torus-diagonal-is-lattice-count: PASS");
}

#[test]
fn criterion_05_spectral_vs_exact_traces() {
    let b = budgets();

    // 7x7 torus: exact rational transition-matrix traces, lengths 2..6
    let spec7 = TorusSpec::new(7, 2).unwrap();
    let g7 = FiniteGraph::torus(spec7, &b).unwrap();
    let trans = nb_matrix::nb_transition(&g7, 6, &b).unwrap();
    let s7 = spectrum::torus_spectrum(spec7, &b).unwrap();
    let probs7 = spectrum::spectral_return_probs(&s7, 3, &b).unwrap();
    for e in &probs7.entries {
        let tr = trans[e.length].entries.trace() / BigRatio::from_integer(BigInt::from(49));
        let exact = bigint_ratio_to_f64(tr.numer(), tr.denom());
        assert!(
            (e.nb - exact).abs() < 1e-10,
            "torus(7,2) length {}: spectral {} vs trace {}",
            e.length,
            e.nb,
            exact
        );
    }

    // 5x5x5 torus: exact integer count-matrix traces, lengths 2 and 4
    let spec5 = TorusSpec::new(5, 3).unwrap();
    let g5 = FiniteGraph::torus(spec5, &b).unwrap();
    let exact5 = spectrum::exact_trace_probs(&g5, 4, &b).unwrap();
    let s5 = spectrum::torus_spectrum(spec5, &b).unwrap();
    let probs5 = spectrum::spectral_return_probs(&s5, 2, &b).unwrap();
    for e in &probs5.entries {
        let (_, ref simple, ref nb) = exact5[e.length - 1];
        let simple_f = bigint_ratio_to_f64(simple.numer(), simple.denom());
        let nb_f = bigint_ratio_to_f64(nb.numer(), nb.denom());
        assert!((e.simple - simple_f).abs() < 1e-10, "length {}", e.length);
        assert!((e.nb - nb_f).abs() < 1e-10, "length {}", e.length);
    }
    println!("criterion 05 spectral-vs-exact-traces: PASS");
}

#[test]
fn criterion_06_regime_closed_forms() {
    for r in 3..=10usize {
        let s = chebyshev::closed_form_agreement(r, 100, 1000).unwrap();
        assert!(
            s.worst_strict <= 1.0,
            "r={r}: strict deviation {}",
            s.worst_strict
        );
        assert!(
            s.worst_near_critical <= 1.0,
            "r={r}: near-critical deviation {}",
            s.worst_near_critical
        );
    }
    let err = chebyshev::chebyshev_degeneration_max_err(50, 501).unwrap();
    assert!(err < 1e-10, "cosine degeneration error {err}");
    println!("criterion 06 regime-closed-forms: PASS");
}

#[test]
fn criterion_07_eigenvalue_bounds() {
    for r in 3..=8usize {
        let s = chebyshev::bound_sweep(r, 200, 10_000, chebyshev::BOUND_CONSTANT).unwrap();
        assert_eq!(s.failures, 0, "r={r}");
        assert!(
            s.min_margin_above >= 0.0,
            "r={r}: supercritical margin {}",
            s.min_margin_above
        );
        assert!(
            s.min_margin_below >= 0.0,
            "r={r}: subcritical margin {}",
            s.min_margin_below
        );
    }
    // the boundary eigenvalues land exactly on the bound
    for r in [3usize, 8] {
        for lambda in [1.0, -1.0] {
            let chk = chebyshev::check_eig_bound(r, 80, lambda, chebyshev::BOUND_CONSTANT).unwrap();
            assert!(chk.pass && chk.above_threshold);
        }
    }
    println!("criterion 07 eigenvalue-bounds: PASS");
}

#[test]
fn criterion_08_asymptotics() {
    assert_all(&verify::suite_asymptotics(5_000, 1_000));
    println!("criterion 08 asymptotics: PASS");
}

#[test]
fn criterion_09_series_tails() {
    assert_all(&verify::suite_series(10_000, 240, &budgets()).unwrap());
    println!("criterion 09 series-tails: PASS");
}

#[test]
fn criterion_10_monte_carlo_calibration() {
    let b = budgets();
    let g = FiniteGraph::torus(TorusSpec::new(5, 2).unwrap(), &b).unwrap();
    let exact = 2.0 / 27.0;
    let cfg = |seed: u64| SimConfig {
        walk: WalkKind::NonBacktracking,
        target: SimTarget::Graph {
            graph: g.clone(),
            start: 0,
        },
        trials: 1_000_000,
        max_steps: 4,
        seed,
    };
    let mut covered = 0usize;
    for seed in 0..20u64 {
        let stats = simulate_walks(&cfg(seed)).unwrap();
        let (lo, hi) = stats.wilson_at(4);
        if lo <= exact && exact <= hi {
            covered += 1;
        }
    }
    assert!(covered >= 18, "95% intervals covered 2/27 only {covered}/20 times");
    let a = simulate_walks(&cfg(7)).unwrap();
    let bb = simulate_walks(&cfg(7)).unwrap();
    assert_eq!(a, bb, "same seed must reproduce identical statistics");
    println!("criterion 10 monte-carlo-calibration: PASS ({covered}/20 covered)");
}

#[test]
fn criterion_11_return_probability_comparison() {
    assert_all(&verify::suite_conjecture(32, 16, &budgets()).unwrap());
    println!("criterion 11 return-probability-comparison: PASS");
}
