//! Stable text renderings of computed artifacts: CSV with `# key=value`
//! metadata comment lines, and JSON documents via serde. Exact integers and
//! rationals are rendered as decimal strings (never floats), so no exported
//! value silently loses precision; float columns are explicitly labeled.

use crate::chebyshev::BoundCheck;
use crate::lattice::{ReturnSeries, WalkKind};
use crate::nb_matrix::{TransitionMatrix, WalkCountMatrix};
use crate::sim::{ProbeRow, ReturnStats};
use crate::spectrum::SpectralSeries;
use crate::BigRatio;
use serde_json::{json, Value};
use std::fmt::Write as _;

/// `"num/den"` with the sign on the numerator; denominators are positive.
pub fn ratio_string(q: &BigRatio) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn walk_kind_label(kind: WalkKind) -> &'static str {
    match kind {
        WalkKind::Simple => "simple",
        WalkKind::NonBacktracking => "nb",
    }
}

/// Count matrix as JSON: entries are decimal strings, row-major nested arrays.
pub fn walk_counts_json(m: &WalkCountMatrix) -> Value {
    let dim = m.entries.dim();
    let rows: Vec<Value> = (0..dim)
        .map(|i| {
            Value::Array(
                m.entries
                    .row(i)
                    .iter()
                    .map(|e| Value::String(e.to_string()))
                    .collect(),
            )
        })
        .collect();
    json!({
        "kind": "walk-counts",
        "graph_hash": m.graph_hash,
        "step": m.step,
        "dim": dim,
        "entries": rows,
    })
}

/// Count matrix as CSV: metadata comments, then one row per line.
pub fn walk_counts_csv(m: &WalkCountMatrix) -> String {
    let dim = m.entries.dim();
    let mut out = String::new();
    let _ = writeln!(out, "# kind=walk-counts");
    let _ = writeln!(out, "# graph_hash={}", m.graph_hash);
    let _ = writeln!(out, "# step={}", m.step);
    let _ = writeln!(out, "# dim={dim}");
    for i in 0..dim {
        let row: Vec<String> = m.entries.row(i).iter().map(|e| e.to_string()).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// Transition matrix as JSON: entries are exact `"num/den"` strings.
pub fn transition_json(t: &TransitionMatrix) -> Value {
    let dim = t.entries.dim();
    let rows: Vec<Value> = (0..dim)
        .map(|i| {
            Value::Array(
                t.entries
                    .row(i)
                    .iter()
                    .map(|e| Value::String(ratio_string(e)))
                    .collect(),
            )
        })
        .collect();
    json!({
        "kind": "transition",
        "graph_hash": t.graph_hash,
        "step": t.step,
        "degree": t.degree,
        "dim": dim,
        "entries": rows,
    })
}

/// Transition matrix as CSV of exact rationals.
pub fn transition_csv(t: &TransitionMatrix) -> String {
    let dim = t.entries.dim();
    let mut out = String::new();
    let _ = writeln!(out, "# kind=transition");
    let _ = writeln!(out, "# graph_hash={}", t.graph_hash);
    let _ = writeln!(out, "# step={}", t.step);
    let _ = writeln!(out, "# degree={}", t.degree);
    let _ = writeln!(out, "# dim={dim}");
    for i in 0..dim {
        let row: Vec<String> = t.entries.row(i).iter().map(ratio_string).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

fn opt_float(v: Option<f64>) -> String {
    v.map_or(String::new(), |x| x.to_string())
}

/// Return series as CSV. `count`, `total` and `prob` are exact;
/// `prob_float`, `partial_sum` and `asymptotic_ratio` are f64 views.
pub fn series_csv(s: &ReturnSeries) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# kind=return-series");
    let _ = writeln!(out, "# dimension={}", s.dimension);
    let _ = writeln!(out, "# walk={}", walk_kind_label(s.walk));
    let _ = writeln!(
        out,
        "length,count,total,prob,prob_float,partial_sum,asymptotic_ratio"
    );
    for e in &s.entries {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            2 * e.k,
            e.count,
            e.total,
            ratio_string(&e.prob),
            e.prob_f64,
            e.partial_sum,
            opt_float(e.asymptotic_ratio)
        );
    }
    out
}

/// Return series as JSON.
pub fn series_json(s: &ReturnSeries) -> Value {
    let entries: Vec<Value> = s
        .entries
        .iter()
        .map(|e| {
            json!({
                "length": 2 * e.k,
                "count": e.count.to_string(),
                "total": e.total.to_string(),
                "prob": ratio_string(&e.prob),
                "prob_float": e.prob_f64,
                "partial_sum": e.partial_sum,
                "asymptotic_ratio": e.asymptotic_ratio,
            })
        })
        .collect();
    json!({
        "kind": "return-series",
        "dimension": s.dimension,
        "walk": walk_kind_label(s.walk),
        "entries": entries,
    })
}

/// Spectral return probabilities as CSV.
pub fn spectral_csv(s: &SpectralSeries) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# kind=spectral-series");
    let _ = writeln!(out, "# torus_side={}", s.spec.n);
    let _ = writeln!(out, "# dimension={}", s.spec.d);
    let _ = writeln!(out, "length,p_simple,p_nb,lattice_exact");
    for e in &s.entries {
        let _ = writeln!(out, "{},{},{},{}", e.length, e.simple, e.nb, e.lattice_exact);
    }
    out
}

/// Spectral return probabilities as JSON.
pub fn spectral_json(s: &SpectralSeries) -> Value {
    json!({
        "kind": "spectral-series",
        "torus_side": s.spec.n,
        "dimension": s.spec.d,
        "entries": s.entries,
    })
}

/// Simulation statistics as CSV, one row per step.
pub fn sim_csv(s: &ReturnStats) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# kind=simulation");
    let _ = writeln!(out, "# walk={}", walk_kind_label(s.walk));
    let _ = writeln!(out, "# target={}", s.target_label);
    let _ = writeln!(out, "# trials={}", s.trials);
    let _ = writeln!(out, "# seed={}", s.seed);
    let _ = writeln!(out, "# stuck={}", s.stuck);
    let _ = writeln!(
        out,
        "step,at_origin,p_hat,ci_low,ci_high,first_return,cum_returned"
    );
    let mut cum = 0u64;
    for step in 1..=s.max_steps {
        cum += s.first_return[step];
        let (lo, hi) = s.wilson_at(step);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            step,
            s.at_origin[step],
            s.p_hat(step),
            lo,
            hi,
            s.first_return[step],
            cum
        );
    }
    out
}

/// Simulation statistics as JSON.
pub fn sim_json(s: &ReturnStats) -> Value {
    let steps: Vec<Value> = (1..=s.max_steps)
        .map(|step| {
            let (lo, hi) = s.wilson_at(step);
            json!({
                "step": step,
                "at_origin": s.at_origin[step],
                "p_hat": s.p_hat(step),
                "ci": [lo, hi],
                "first_return": s.first_return[step],
            })
        })
        .collect();
    json!({
        "kind": "simulation",
        "walk": walk_kind_label(s.walk),
        "target": s.target_label,
        "trials": s.trials,
        "max_steps": s.max_steps,
        "seed": s.seed,
        "stuck": s.stuck,
        "steps": steps,
    })
}

/// Eigenvalue-bound checks as CSV rows.
pub fn bounds_csv(rows: &[BoundCheck]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# kind=eigenvalue-bounds");
    let _ = writeln!(out, "r,k,lambda,above_threshold,lhs,rhs,margin,pass");
    for c in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            c.r, c.k, c.lambda, c.above_threshold, c.lhs, c.rhs, c.margin, c.pass
        );
    }
    out
}

/// Exact-vs-empirical probe rows as CSV.
pub fn probe_csv(rows: &[ProbeRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# kind=conjecture-probe");
    let _ = writeln!(
        out,
        "length,exact_nb,exact_simple,exact_holds,est_nb,ci_nb_low,ci_nb_high,est_simple,ci_simple_low,ci_simple_high"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.length,
            r.exact_nb,
            r.exact_simple,
            r.exact_holds,
            r.est_nb,
            r.ci_nb.0,
            r.ci_nb.1,
            r.est_simple,
            r.ci_simple.0,
            r.ci_simple.1
        );
    }
    out
}

/// Probe rows as JSON.
pub fn probe_json(rows: &[ProbeRow]) -> Value {
    let items: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "length": r.length,
                "exact_nb": r.exact_nb,
                "exact_simple": r.exact_simple,
                "exact_holds": r.exact_holds,
                "est_nb": r.est_nb,
                "ci_nb": [r.ci_nb.0, r.ci_nb.1],
                "est_simple": r.est_simple,
                "ci_simple": [r.ci_simple.0, r.ci_simple.1],
            })
        })
        .collect();
    json!({ "kind": "conjecture-probe", "rows": items })
}
