//! Randomized structural properties, checked over generated inputs.

use nbwalk_core::budget::Budgets;
use nbwalk_core::chebyshev::p_eval_f64;
use nbwalk_core::graph::{FiniteGraph, TorusSpec};
use nbwalk_core::lattice::nb_return_series;
use nbwalk_core::nb_matrix::{nb_counts, nb_counts_oracle_matrices, nb_transition};
use nbwalk_core::sim::wilson_interval;
use num_traits::{One, Zero};
use proptest::collection::btree_set;
use proptest::prelude::*;

fn budgets() -> Budgets {
    Budgets::default()
}

/// Connected simple graph on up to `max_n` vertices, edge set drawn from
/// the complete graph. Retries by unioning in a spanning path.
fn arb_graph(max_n: usize) -> impl Strategy<Value = FiniteGraph> {
    (3..=max_n)
        .prop_flat_map(|n| {
            let pairs = btree_set((0..n, 0..n), 1..=(n * (n - 1) / 2).min(14));
            (Just(n), pairs)
        })
        .prop_map(|(n, pairs)| {
            let mut edges: Vec<(usize, usize)> = pairs
                .into_iter()
                .filter(|&(u, v)| u != v)
                .map(|(u, v)| (u.min(v), u.max(v)))
                .collect();
            // a path through every vertex keeps the graph connected and
            // pins vertex n-1 so serialization round-trips exactly
            for v in 1..n {
                edges.push((v - 1, v));
            }
            edges.sort_unstable();
            edges.dedup();
            FiniteGraph::from_edges(n, &edges).expect("valid edges")
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn edge_list_round_trips(g in arb_graph(9)) {
        let text = FiniteGraph::serialize_edge_list(&g);
        let back = FiniteGraph::parse_edge_list(&text, &budgets()).expect("own output parses");
        prop_assert_eq!(back, g);
    }

    #[test]
    fn torus_is_regular_of_degree_2d(n in 3usize..7, d in 1usize..4) {
        let spec = TorusSpec::new(n, d).unwrap();
        let g = FiniteGraph::torus(spec, &budgets()).unwrap();
        prop_assert_eq!(g.vertex_count(), n.pow(d as u32));
        prop_assert_eq!(g.regular_degree(), Some(2 * d));
        prop_assert!(g.is_connected());
    }

    #[test]
    fn count_matrices_are_symmetric_nonnegative_and_match_the_oracle(
        g in arb_graph(7),
        k_max in 1usize..6,
    ) {
        let b = budgets();
        let rec = nb_counts(&g, k_max, &b).unwrap();
        let dfs = nb_counts_oracle_matrices(&g, k_max, &b).unwrap();
        prop_assert_eq!(rec.len(), k_max + 1);
        for (m, o) in rec.iter().zip(&dfs) {
            prop_assert!(m.entries.is_symmetric());
            prop_assert!(m.entries.is_nonnegative());
            prop_assert_eq!(&m.entries, &o.entries);
        }
    }

    #[test]
    fn cycle_transition_rows_sum_to_one(n in 3usize..12, k_max in 1usize..8) {
        let g = FiniteGraph::cycle(n, &budgets()).unwrap();
        let trans = nb_transition(&g, k_max, &budgets()).unwrap();
        for t in &trans {
            for s in t.entries.row_sums() {
                prop_assert!(s.is_one(), "step {} row sum {}", t.step, s);
            }
        }
    }

    #[test]
    fn return_series_is_a_monotone_partial_sum_of_probabilities(
        d in 1usize..4,
        k_max in 1usize..12,
    ) {
        let series = nb_return_series(d, k_max, &budgets()).unwrap();
        let mut prev = 0.0f64;
        for e in &series.entries {
            prop_assert!(e.prob >= num_rational::BigRational::zero());
            prop_assert!(e.prob <= num_rational::BigRational::one());
            prop_assert!(e.partial_sum >= prev);
            prev = e.partial_sum;
        }
    }

    #[test]
    fn wilson_interval_brackets_the_point_estimate(succ_frac in 0.0f64..=1.0, trials in 1u64..100_000) {
        let successes = ((trials as f64) * succ_frac).round() as u64;
        let successes = successes.min(trials);
        let (lo, hi) = wilson_interval(successes, trials, 1.959963984540054);
        let p_hat = successes as f64 / trials as f64;
        prop_assert!((0.0..=1.0).contains(&lo));
        prop_assert!((0.0..=1.0).contains(&hi));
        prop_assert!(lo <= p_hat + 1e-12 && p_hat <= hi + 1e-12);
    }

    #[test]
    fn bare_integer_budget_override_sets_vertices(v in 1u64..1_000_000) {
        let b = Budgets::default().with_overrides(&v.to_string()).unwrap();
        prop_assert_eq!(b.vertices, v);
        prop_assert_eq!(b.matrix_dim, Budgets::default().matrix_dim);
    }

    #[test]
    fn polynomial_parity_matches_index(r in 3usize..9, k in 0usize..40, x in -1.0f64..1.0) {
        let plus = p_eval_f64(r, k, x).unwrap();
        let minus = p_eval_f64(r, k, -x).unwrap();
        let expect = if k % 2 == 0 { plus } else { -plus };
        let scale = plus.abs().max(1.0);
        prop_assert!((minus - expect).abs() <= 1e-9 * scale,
            "p_{}({}) = {} vs parity image {}", k, -x, minus, expect);
    }
}
