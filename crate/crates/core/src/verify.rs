//! Named verification suites: each one cross-checks independent computation
//! routes or asserts a quantitative property, and reports per-check
//! pass/fail results. Failures are reported, never silently dropped; a
//! `Result::Err` means the suite could not run at all (budget, bad input),
//! not that a check failed.

use crate::budget::Budgets;
use crate::chebyshev;
use crate::combinatorics::{self, bigint_ratio_to_f64, BinomialTable};
use crate::error::Result;
use crate::graph::{FiniteGraph, TorusSpec};
use crate::lattice;
use crate::nb_matrix;
use crate::spectrum;
use crate::BigRatio;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// One named verification outcome.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn check(name: impl Into<String>, pass: bool, detail: String) -> CheckResult {
    CheckResult {
        name: name.into(),
        pass,
        detail,
    }
}

/// Suite names accepted by the command-line `verify` subcommand.
pub const SUITE_NAMES: &[&str] = &[
    "sun",
    "trinomial",
    "oracle",
    "bounds",
    "closed-form",
    "asymptotics",
    "series",
    "conjecture",
    "spectral",
    "all",
];

/// Squared central trinomial numbers against the alternating binomial sum,
/// exactly, for every `n <= n_max`.
pub fn suite_sun(n_max: usize) -> Vec<CheckResult> {
    let mut worst: Option<usize> = None;
    for n in 0..=n_max {
        if !combinatorics::sun_identity_check(n).holds {
            worst = Some(n);
            break;
        }
    }
    vec![check(
        format!("sun-identity n<={n_max}"),
        worst.is_none(),
        match worst {
            None => format!("T_n^2 equals the alternating sum for all n <= {n_max}"),
            Some(n) => format!("first failure at n = {n}"),
        },
    )]
}

/// The three closed-form routes to `Z^2` closed non-backtracking counts,
/// the polynomial-expansion oracle, and the dynamic-programming oracle.
pub fn suite_trinomial(n_max: usize, dp_n_max: usize, budgets: &Budgets) -> Result<Vec<CheckResult>> {
    let table = BinomialTable::with_rows(2 * n_max);
    let mut out = Vec::new();

    let mut forms_agree = true;
    let mut first_bad = 0usize;
    for n in 1..=n_max {
        let a = lattice::nb_closed_count_z2_sum(n, &table);
        let b = lattice::nb_closed_count_z2_reindexed(n, &table);
        let c = BigInt::from(lattice::nb_closed_count_z2_trinomial(n));
        if a != b || b != c {
            forms_agree = false;
            first_bad = n;
            break;
        }
    }
    out.push(check(
        format!("z2-three-forms n<={n_max}"),
        forms_agree,
        if forms_agree {
            "direct sum, reindexed sum and trinomial difference agree".into()
        } else {
            format!("first disagreement at n = {first_bad}")
        },
    ));

    let poly_max = n_max.min(48);
    let by_poly = combinatorics::trinomial_by_poly_expansion(poly_max);
    let by_sum = combinatorics::trinomial_table(poly_max);
    out.push(check(
        format!("trinomial-vs-poly-expansion n<={poly_max}"),
        by_poly == by_sum,
        "binomial sum against literal polynomial powers".into(),
    ));

    let mut dp_ok = true;
    let mut dp_detail = String::new();
    for n in 1..=dp_n_max {
        let dp = BigInt::from(lattice::lattice_dp_oracle(2, 2 * n, true, budgets)?);
        let closed = BigInt::from(lattice::nb_closed_count_z2_trinomial(n));
        if dp != closed {
            dp_ok = false;
            dp_detail = format!("mismatch at length {}: dp {} vs closed {}", 2 * n, dp, closed);
            break;
        }
    }
    out.push(check(
        format!("z2-dp-oracle length<={}", 2 * dp_n_max),
        dp_ok,
        if dp_ok {
            "state-space dynamic program reproduces the closed form".into()
        } else {
            dp_detail
        },
    ));

    let prefix: Vec<BigInt> = (1..=3)
        .map(|n| BigInt::from(lattice::nb_closed_count_z2_trinomial(n)))
        .collect();
    let expect: Vec<BigInt> = [0u32, 8, 40].iter().map(|&v| BigInt::from(v)).collect();
    out.push(check(
        "z2-first-values",
        prefix == expect,
        format!("lengths 2,4,6 give {prefix:?}"),
    ));
    Ok(out)
}

fn seeded_graph(n: usize, p: f64, seed: u64) -> FiniteGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    FiniteGraph::from_edges(n, &edges).expect("generated edges are valid")
}

/// Count-matrix routes against each other and against depth-first
/// enumeration on a battery of small graphs.
pub fn suite_oracle(k_max: usize, budgets: &Budgets) -> Result<Vec<CheckResult>> {
    let battery: Vec<(String, FiniteGraph)> = vec![
        ("cycle-3".into(), FiniteGraph::cycle(3, budgets)?),
        ("cycle-5".into(), FiniteGraph::cycle(5, budgets)?),
        ("complete-4".into(), FiniteGraph::complete(4, budgets)?),
        ("complete-5".into(), FiniteGraph::complete(5, budgets)?),
        (
            "torus-5x5".into(),
            FiniteGraph::torus(TorusSpec::new(5, 2)?, budgets)?,
        ),
        ("random-10".into(), seeded_graph(10, 0.45, 0xACE1)),
        ("random-9".into(), seeded_graph(9, 0.5, 0xACE2)),
    ];
    let mut out = Vec::new();
    for (name, g) in &battery {
        let rec = nb_matrix::nb_counts(g, k_max, budgets)?;
        let gen = nb_matrix::gen_func_counts(g, k_max, budgets)?;
        let oracle = nb_matrix::nb_counts_oracle_matrices(g, k_max, budgets)?;
        let rec_entries: Vec<_> = rec.iter().map(|m| &m.entries).collect();
        let gen_entries: Vec<_> = gen.iter().map(|m| &m.entries).collect();
        let ora_entries: Vec<_> = oracle.iter().map(|m| &m.entries).collect();
        out.push(check(
            format!("recurrence-vs-genfunc {name} k<={k_max}"),
            rec_entries == gen_entries,
            "three-term recurrence against series inversion".into(),
        ));
        out.push(check(
            format!("recurrence-vs-dfs {name} k<={k_max}"),
            rec_entries == ora_entries,
            "three-term recurrence against exhaustive enumeration".into(),
        ));
        if g.regular_degree().is_some_and(|r| r >= 2) {
            let mut closed_ok = true;
            for (k, m) in rec.iter().enumerate() {
                let closed = nb_matrix::nb_counts_regular_closed_form(g, k, budgets)?;
                if closed.entries != m.entries {
                    closed_ok = false;
                    break;
                }
            }
            out.push(check(
                format!("recurrence-vs-closed-form {name} k<={k_max}"),
                closed_ok,
                "three-term recurrence against the alternating power form".into(),
            ));
        }
    }
    Ok(out)
}

/// Eigenvalue bound `|p_k(λ)| <= |λ|^k` above the spectral threshold and
/// `<= 2 k (r-1)^{-k/2}` at or below it, swept over a grid.
pub fn suite_bounds(rs: &[usize], k_max: usize, grid: usize) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for &r in rs {
        let s = chebyshev::bound_sweep(r, k_max, grid, chebyshev::BOUND_CONSTANT)?;
        out.push(check(
            format!("eig-bound r={r} k<={k_max}"),
            s.failures == 0 && s.min_margin_above >= 0.0 && s.min_margin_below >= 0.0,
            format!(
                "{} checks, {} escalated to exact, min margins {:.3e} (above) / {:.3e} (below)",
                s.checked, s.escalations, s.min_margin_above, s.min_margin_below
            ),
        ));
    }
    Ok(out)
}

/// Regime closed forms against the defining recurrence, including the
/// degeneration to cosines at degree 2.
pub fn suite_closed_form(rs: &[usize], k_max: usize, grid: usize) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for &r in rs {
        let s = chebyshev::closed_form_agreement(r, k_max, grid)?;
        out.push(check(
            format!("poly-closed-form r={r} k<={k_max}"),
            s.worst_strict <= 1.0 && s.worst_near_critical <= 1.0,
            format!(
                "normalized deviation {:.3} strict, {:.3} near-critical (<= 1 passes)",
                s.worst_strict, s.worst_near_critical
            ),
        ));
    }
    let err = chebyshev::chebyshev_degeneration_max_err(50, 501)?;
    out.push(check(
        "cosine-degeneration r=2 k<=50",
        err < 1e-10,
        format!("max |p_k(cos t) - cos(kt)| = {err:.3e}"),
    ));
    Ok(out)
}

/// Asymptotic quality checks: the trinomial approximation's error size and
/// decay order, and return probabilities against their leading terms.
pub fn suite_asymptotics(k_nb: usize, k_simple: usize) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let rel100 = combinatorics::trinomial_asymptotic_rel_error(100);
    out.push(check(
        "trinomial-asymptotic n=100",
        rel100 < 2e-5,
        format!("relative error {rel100:.3e}"),
    ));
    let mut ratios_ok = true;
    let mut detail = String::from("error halving ratios:");
    for n in [25usize, 50, 100] {
        let ratio = combinatorics::trinomial_asymptotic_rel_error(2 * n)
            / combinatorics::trinomial_asymptotic_rel_error(n);
        detail.push_str(&format!(" e({})/e({n})={ratio:.3}", 2 * n));
        // the corrected approximation's error decays like n^-2: halving
        // ratio near 1/4
        if !(0.15..=0.35).contains(&ratio) {
            ratios_ok = false;
        }
    }
    out.push(check("trinomial-error-decay-order", ratios_ok, detail));

    // NB return on Z^2 against 1/(2 pi k), exact count path
    let count = lattice::nb_closed_count_z2_trinomial(k_nb);
    let total = lattice::lattice_total_walks(2, 2 * k_nb, true);
    let p = combinatorics::big_ratio_to_f64(&count, &total);
    let ratio = p * 2.0 * std::f64::consts::PI * k_nb as f64;
    out.push(check(
        format!("nb-return-asymptotic k={k_nb}"),
        (0.99..=1.01).contains(&ratio),
        format!("p(2k) * 2 pi k = {ratio:.6}"),
    ));

    // simple return on Z^2 against 1/(pi k): p(2k) = (C(2k,k)/4^k)^2
    let mut central = crate::BigCount::from(1u32); // C(2j, j)
    for j in 1..=k_simple {
        central = central * (2 * (2 * j as u64 - 1)) / j as u64;
    }
    let p_simple = combinatorics::big_ratio_to_f64(
        &(&central * &central),
        &crate::BigCount::from(4u32).pow(2 * k_simple as u32),
    );
    let ratio_simple = p_simple * std::f64::consts::PI * k_simple as f64;
    out.push(check(
        format!("simple-return-asymptotic k={k_simple}"),
        (0.99..=1.01).contains(&ratio_simple),
        format!("p(2k) * pi k = {ratio_simple:.6}"),
    ));
    out
}

fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Return-series shape checks per dimension: the `d = 2` tail follows
/// `1/(2 pi k)`, the `d = 3` tail is dominated termwise by the simple walk
/// plus an exponentially small correction, and `d = 1` never returns.
pub fn suite_series(
    d2_horizon: usize,
    d3_horizon: usize,
    budgets: &Budgets,
) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();

    // d = 2: log-log fit of the float-path probabilities over [100, horizon]
    let probs = lattice::nb_return_probs_f64_z2(d2_horizon);
    let lo = 100.min(d2_horizon / 2);
    let (xs, ys): (Vec<f64>, Vec<f64>) = (lo..=d2_horizon)
        .map(|k| ((k as f64).ln(), probs[k - 1].ln()))
        .unzip();
    let (slope, intercept) = fit_line(&xs, &ys);
    let level = intercept.exp() * 2.0 * std::f64::consts::PI;
    out.push(check(
        format!("z2-tail-decay k in [{lo},{d2_horizon}]"),
        (slope + 1.0).abs() <= 0.2 && (level - 1.0).abs() <= 0.2,
        format!("log-log slope {slope:.4} (expect -1), level * 2 pi = {level:.4} (expect 1)"),
    ));

    // d = 3: exact series checks
    let nb = lattice::nb_return_series(3, d3_horizon, budgets)?;
    let simple = lattice::simple_return_series(3, d3_horizon, budgets)?;
    let incr_from = 200.min(d3_horizon);
    let max_incr = nb.entries[incr_from - 1..]
        .iter()
        .map(|e| e.prob_f64)
        .fold(0.0f64, f64::max);
    out.push(check(
        format!("z3-increments k in [{incr_from},{d3_horizon}]"),
        max_incr < 1e-3,
        format!("largest term {max_incr:.3e}"),
    ));

    let mut dominated = true;
    let mut worst_k = 0;
    for (n, s) in nb.entries.iter().zip(&simple.entries) {
        // envelope: p_nb(2k) <= p_simple(2k) + 2 * (2k) * 5^(-k), exact
        let correction = BigRatio::new(
            BigInt::from(4 * n.k as u64),
            BigInt::from(5u32).pow(n.k as u32),
        );
        if n.prob > &s.prob + &correction {
            dominated = false;
            worst_k = n.k;
            break;
        }
    }
    out.push(check(
        format!("z3-envelope-domination k<={d3_horizon}"),
        dominated,
        if dominated {
            "every term sits under the simple walk plus the spectral correction".into()
        } else {
            format!("envelope fails at length {}", 2 * worst_k)
        },
    ));

    // tail of the correction alone, from k = 200 on: sum 4k/5^k, geometric
    let q: f64 = 0.2;
    let k0 = 200.0f64;
    let tail = 4.0 * q.powf(k0) * (k0 - (k0 - 1.0) * q) / ((1.0 - q) * (1.0 - q));
    out.push(check(
        "z3-correction-tail k>=200",
        tail < 1e-3,
        format!("sum of 4k 5^-k from 200 is {tail:.3e}"),
    ));

    // d = 1: no returns at all
    let line = lattice::nb_return_series(1, 64, budgets)?;
    out.push(check(
        "z1-no-returns",
        line.entries.iter().all(|e| e.count.is_zero()) && line.partial_sum() == 0.0,
        "a walker on the line that cannot reverse never revisits the origin".into(),
    ));
    Ok(out)
}

/// Exact comparison of non-backtracking against simple return
/// probabilities, every even length up to the horizons.
pub fn suite_conjecture(k2: usize, k3: usize, budgets: &Budgets) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for (d, k_max) in [(2usize, k2), (3usize, k3)] {
        let points = lattice::conjecture_compare(d, k_max, budgets)?;
        let violations: Vec<usize> = points.iter().filter(|p| !p.holds).map(|p| p.k).collect();
        let min_gap = points
            .iter()
            .map(|p| p.gap_f64)
            .fold(f64::INFINITY, f64::min);
        out.push(check(
            format!("nb-return-below-simple d={d} length<={}", 2 * k_max),
            violations.is_empty(),
            if violations.is_empty() {
                format!("minimum gap {min_gap:.3e}")
            } else {
                format!("violated at k = {violations:?}")
            },
        ));
    }
    Ok(out)
}

/// Spectral return probabilities against exact matrix traces, and torus
/// count diagonals against lattice counts below the wrap-around length.
pub fn suite_spectral(budgets: &Budgets) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for (spec, k_max) in [
        (TorusSpec::new(7, 2)?, 3usize),
        (TorusSpec::new(5, 3)?, 2usize),
    ] {
        let s = spectrum::torus_spectrum(spec, budgets)?;
        let probs = spectrum::spectral_return_probs(&s, k_max, budgets)?;
        let g = FiniteGraph::torus(spec, budgets)?;
        let exact = spectrum::exact_trace_probs(&g, 2 * k_max, budgets)?;
        let mut worst: f64 = 0.0;
        for e in &probs.entries {
            let (_, ref simple, ref nb) = exact[e.length - 1];
            worst = worst.max((e.simple - bigint_ratio_to_f64(simple.numer(), simple.denom())).abs());
            worst = worst.max((e.nb - bigint_ratio_to_f64(nb.numer(), nb.denom())).abs());
        }
        out.push(check(
            format!("spectral-vs-trace torus({}, {}) length<={}", spec.n, spec.d, 2 * k_max),
            worst < 1e-10,
            format!("max |spectral - exact trace| = {worst:.3e}"),
        ));
    }

    // below the wrap-around length the torus diagonal equals the lattice count
    let spec = TorusSpec::new(11, 2)?;
    let g = FiniteGraph::torus(spec, budgets)?;
    let counts = nb_matrix::nb_counts(&g, 10, budgets)?;
    let mut ok = true;
    let mut detail = String::from("lengths 2..10:");
    for k in 1..=5usize {
        let torus_diag = counts[2 * k].entries.get(0, 0).clone();
        let lattice_count = BigInt::from(lattice::nb_closed_count_z2_trinomial(k));
        detail.push_str(&format!(" {torus_diag}"));
        if torus_diag != lattice_count {
            ok = false;
        }
    }
    out.push(check("torus-diag-vs-lattice 11x11", ok, detail));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_pass(results: &[CheckResult]) {
        for r in results {
            assert!(r.pass, "{}: {}", r.name, r.detail);
        }
        assert!(!results.is_empty());
    }

    #[test]
    fn sun_suite_passes() {
        all_pass(&suite_sun(60));
    }

    #[test]
    fn trinomial_suite_passes() {
        all_pass(&suite_trinomial(24, 6, &Budgets::default()).unwrap());
    }

    #[test]
    fn oracle_suite_passes() {
        all_pass(&suite_oracle(6, &Budgets::default()).unwrap());
    }

    #[test]
    fn bounds_suite_passes() {
        all_pass(&suite_bounds(&[3, 5], 40, 101).unwrap());
    }

    #[test]
    fn closed_form_suite_passes() {
        all_pass(&suite_closed_form(&[3, 4], 40, 101).unwrap());
    }

    #[test]
    fn asymptotics_suite_passes() {
        all_pass(&suite_asymptotics(500, 200));
    }

    #[test]
    fn series_suite_passes() {
        all_pass(&suite_series(2_000, 64, &Budgets::default()).unwrap());
    }

    #[test]
    fn conjecture_suite_passes() {
        all_pass(&suite_conjecture(12, 8, &Budgets::default()).unwrap());
    }

    #[test]
    fn spectral_suite_passes() {
        all_pass(&suite_spectral(&Budgets::default()).unwrap());
    }
}
