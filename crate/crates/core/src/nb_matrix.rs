//! Walk-count and transition matrices for non-backtracking walks.
//!
//! `Ã^(k)(u,v)` counts walks `u = v_0, ..., v_k = v` with `v_{i+1} != v_{i-1}`.
//! Three independent routes compute it:
//!
//! * a three-term matrix recurrence (production path, any simple graph),
//! * truncated power-series inversion of the generating-function identity
//!   `(I - xA + x^2 (D - I)) * S(x) = (1 - x^2) I`,
//! * for `r`-regular graphs, an alternating closed form in powers of `A`.
//!
//! A depth-first enumeration oracle provides ground truth at small sizes.

use crate::budget::Budgets;
use crate::error::{Error, Result};
use crate::graph::FiniteGraph;
use crate::matrix::{IntMatrix, RatMatrix};
use crate::BigCount;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Exact count matrix for walks of one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkCountMatrix {
    pub step: usize,
    pub entries: IntMatrix,
    /// Content hash of the source graph, carried into exports.
    pub graph_hash: String,
}

/// Exact non-backtracking transition matrix `P̃^(k)` of a regular graph:
/// `P̃^(k)(u,v)` is the probability that a uniform non-backtracking walk
/// from `u` sits at `v` after `k` steps. Rows sum to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    pub step: usize,
    pub degree: usize,
    pub entries: RatMatrix,
    pub graph_hash: String,
}

impl TransitionMatrix {
    /// Float view of an entry, for output formatting only.
    pub fn entry_f64(&self, i: usize, j: usize) -> f64 {
        self.entries.get(i, j).to_f64().unwrap_or(f64::NAN)
    }
}

/// Count matrices `Ã^(0), ..., Ã^(k_max)` by the three-term recurrence
///
/// `Ã^(0) = I`, `Ã^(1) = A`, `Ã^(2) = A^2 - D`,
/// `Ã^(k+2) = A Ã^(k+1) - (D - I) Ã^(k)`.
///
/// Works on any simple graph, regular or not.
pub fn nb_counts(g: &FiniteGraph, k_max: usize, budgets: &Budgets) -> Result<Vec<WalkCountMatrix>> {
    let n = g.vertex_count();
    budgets.check_matrix_dim(n)?;
    let hash = g.content_hash();
    let a = IntMatrix::adjacency(g);
    let d_minus_i: Vec<BigInt> = (0..n).map(|v| BigInt::from(g.degree(v)) - 1).collect();

    let mut out = Vec::with_capacity(k_max + 1);
    out.push(IntMatrix::identity(n));
    if k_max >= 1 {
        out.push(a.clone());
    }
    if k_max >= 2 {
        let d = IntMatrix::degrees(g);
        out.push(a.mul(&a).sub(&d));
    }
    for k in 3..=k_max {
        let prev = &out[k - 1];
        let prev2 = &out[k - 2];
        let next = a.mul(prev).sub(&prev2.scale_rows(&d_minus_i));
        out.push(next);
    }
    Ok(out
        .into_iter()
        .enumerate()
        .map(|(step, entries)| WalkCountMatrix {
            step,
            entries,
            graph_hash: hash.clone(),
        })
        .collect())
}

/// Count matrices as power-series coefficients of
/// `F(x) = (1 - x^2)(I - xA + x^2 (D - I))^{-1}`,
/// obtained by inverting the series term by term: with
/// `M(x) = I - xA + x^2 (D-I)` and `R(x) = (1-x^2) I`, the coefficients
/// satisfy `S_k = R_k - M_1 S_{k-1} - M_2 S_{k-2}`.
///
/// Independent route from [`nb_counts`] in form, identical in value.
pub fn gen_func_counts(
    g: &FiniteGraph,
    k_max: usize,
    budgets: &Budgets,
) -> Result<Vec<WalkCountMatrix>> {
    let n = g.vertex_count();
    budgets.check_matrix_dim(n)?;
    let hash = g.content_hash();
    // m1 = -A, m2 = D - I; the constant term of M is I, so no division
    // is needed when solving M(x) S(x) = R(x) order by order.
    let m1 = IntMatrix::adjacency(g).scale(&BigInt::from(-1));
    let m2_diag: Vec<BigInt> = (0..n).map(|v| BigInt::from(g.degree(v)) - 1).collect();

    let rhs = |k: usize| -> Option<IntMatrix> {
        match k {
            0 => Some(IntMatrix::identity(n)),
            2 => Some(IntMatrix::identity(n).scale(&BigInt::from(-1))),
            _ => None,
        }
    };

    let mut coeffs: Vec<IntMatrix> = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut s_k = rhs(k).unwrap_or_else(|| IntMatrix::zero(n));
        if k >= 1 {
            s_k = s_k.sub(&m1.mul(&coeffs[k - 1]));
        }
        if k >= 2 {
            s_k = s_k.sub(&coeffs[k - 2].scale_rows(&m2_diag));
        }
        coeffs.push(s_k);
    }
    Ok(coeffs
        .into_iter()
        .enumerate()
        .map(|(step, entries)| WalkCountMatrix {
            step,
            entries,
            graph_hash: hash.clone(),
        })
        .collect())
}

/// Closed form for `r`-regular graphs:
///
/// `Ã^(n) = sum_{i=0}^{floor(n/2)} (-1)^i C(n-i, i) (r-1)^i A^{n-2i}`
/// `       - sum_{i=0}^{floor(n/2)-1} (-1)^i C(n-i-2, i) (r-1)^i A^{n-2i-2}`.
pub fn nb_counts_regular_closed_form(
    g: &FiniteGraph,
    n_steps: usize,
    budgets: &Budgets,
) -> Result<WalkCountMatrix> {
    let dim = g.vertex_count();
    budgets.check_matrix_dim(dim)?;
    let r = g
        .regular_degree()
        .ok_or_else(|| Error::NotRegular("closed-form counts need a regular graph".into()))?;
    let a = IntMatrix::adjacency(g);

    // powers A^0..A^n, computed once
    let mut powers = Vec::with_capacity(n_steps + 1);
    powers.push(IntMatrix::identity(dim));
    for _ in 1..=n_steps {
        powers.push(a.mul(powers.last().unwrap()));
    }

    let r_minus_1 = BigInt::from(r as i64 - 1);
    let mut acc = IntMatrix::zero(dim);
    let mut weight = BigInt::one(); // (-1)^i C(n-i, i) (r-1)^i
    for i in 0..=(n_steps / 2) {
        if i > 0 {
            // C(n-i, i) = C(n-i+1, i-1) * (n-2i+2)(n-2i+1) / (i (n-i+1))
            let num = BigInt::from((n_steps - 2 * i + 2) as u64 * (n_steps - 2 * i + 1) as u64);
            let den = BigInt::from(i as u64 * (n_steps - i + 1) as u64);
            weight = -(weight * num * &r_minus_1) / den;
        }
        acc = acc.add(&powers[n_steps - 2 * i].scale(&weight));
    }
    if n_steps >= 2 {
        let mut weight = BigInt::one(); // (-1)^i C(n-i-2, i) (r-1)^i
        for i in 0..=(n_steps / 2 - 1) {
            if i > 0 {
                let num = BigInt::from((n_steps - 2 * i) as u64 * (n_steps - 2 * i - 1) as u64);
                let den = BigInt::from(i as u64 * (n_steps - i - 1) as u64);
                weight = -(weight * num * &r_minus_1) / den;
            }
            acc = acc.sub(&powers[n_steps - 2 * i - 2].scale(&weight));
        }
    }
    Ok(WalkCountMatrix {
        step: n_steps,
        entries: acc,
        graph_hash: g.content_hash(),
    })
}

/// Total non-backtracking walks of length `k` from any vertex of an
/// `r`-regular graph: `r (r-1)^(k-1)` for `k >= 1`, `1` for `k = 0`.
pub fn regular_total_walks(r: usize, k: usize) -> BigCount {
    if k == 0 {
        return BigCount::one();
    }
    BigCount::from(r) * BigCount::from(r - 1).pow(k as u32 - 1)
}

/// Transition matrices `P̃^(0), ..., P̃^(k_max)` of an `r`-regular graph
/// (`r >= 2`) in exact rationals, via
///
/// `P̃^(0) = I`, `P̃^(1) = P = A/r`,
/// `P̃^(k+2) = (r/(r-1)) P P̃^(k+1) - (1/(r-1)) P̃^(k)`.
pub fn nb_transition(
    g: &FiniteGraph,
    k_max: usize,
    budgets: &Budgets,
) -> Result<Vec<TransitionMatrix>> {
    let n = g.vertex_count();
    budgets.check_matrix_dim(n)?;
    let r = g
        .regular_degree()
        .ok_or_else(|| Error::NotRegular("transition matrices need a regular graph".into()))?;
    if r < 2 {
        return Err(Error::UnsupportedDegree(r));
    }
    let hash = g.content_hash();
    let p = IntMatrix::adjacency(g).to_rational(&BigInt::from(r as i64));
    let lead = BigRational::new(BigInt::from(r as i64), BigInt::from(r as i64 - 1));
    let tail = BigRational::new(BigInt::one(), BigInt::from(r as i64 - 1));

    let mut out = Vec::with_capacity(k_max + 1);
    out.push(RatMatrix::identity(n));
    if k_max >= 1 {
        out.push(p.clone());
    }
    for k in 2..=k_max {
        let next = p
            .mul(&out[k - 1])
            .scale(&lead)
            .sub(&out[k - 2].scale(&tail));
        out.push(next);
    }
    Ok(out
        .into_iter()
        .enumerate()
        .map(|(step, entries)| TransitionMatrix {
            step,
            degree: r,
            entries,
            graph_hash: hash.clone(),
        })
        .collect())
}

fn oracle_guard(g: &FiniteGraph, k: usize, budgets: &Budgets) -> Result<()> {
    if k > budgets.oracle_depth {
        return Err(Error::OracleBudget(format!(
            "depth {k} exceeds oracle depth {}",
            budgets.oracle_depth
        )));
    }
    if g.vertex_count() > budgets.oracle_vertices {
        return Err(Error::OracleBudget(format!(
            "{} vertices exceed oracle vertex limit {}",
            g.vertex_count(),
            budgets.oracle_vertices
        )));
    }
    let dmax = (0..g.vertex_count()).map(|v| g.degree(v)).max().unwrap_or(0);
    let mut estimate = 1u128;
    for step in 0..k {
        let branch = if step == 0 { dmax } else { dmax.saturating_sub(1).max(1) };
        estimate = estimate.saturating_mul(branch as u128);
        if estimate > budgets.oracle_work as u128 {
            return Err(Error::OracleBudget(format!(
                "estimated enumeration of ~{estimate} walks exceeds work budget {}",
                budgets.oracle_work
            )));
        }
    }
    Ok(())
}

fn oracle_counts_from(g: &FiniteGraph, start: usize, k: usize) -> Vec<Vec<BigCount>> {
    // counts[j][v] = walks of length j from start ending at v, accumulated
    // by explicit depth-first enumeration of every walk prefix
    let n = g.vertex_count();
    let mut counts = vec![vec![BigCount::zero(); n]; k + 1];
    counts[0][start] += 1u32;
    let mut stack: Vec<(usize, usize, usize)> = Vec::new(); // (vertex, prev, depth)
    for &v in g.neighbors(start) {
        stack.push((v as usize, start, 1));
    }
    while let Some((v, prev, depth)) = stack.pop() {
        counts[depth][v] += 1u32;
        if depth == k {
            continue;
        }
        for &w in g.neighbors(v) {
            if w as usize != prev {
                stack.push((w as usize, v, depth + 1));
            }
        }
    }
    counts
}

/// Ground-truth count of non-backtracking walks from `u` to `v` of length
/// `k`, by brute-force enumeration. Budgets bound depth, vertex count, and
/// estimated work.
pub fn nb_counts_brute_force(
    g: &FiniteGraph,
    u: usize,
    v: usize,
    k: usize,
    budgets: &Budgets,
) -> Result<BigCount> {
    oracle_guard(g, k, budgets)?;
    let counts = oracle_counts_from(g, u, k);
    Ok(counts[k][v].clone())
}

/// Full count matrices per length from the brute-force oracle; the test
/// battery compares these entrywise against the analytic routes.
pub fn nb_counts_oracle_matrices(
    g: &FiniteGraph,
    k_max: usize,
    budgets: &Budgets,
) -> Result<Vec<WalkCountMatrix>> {
    oracle_guard(g, k_max, budgets)?;
    let n = g.vertex_count();
    let hash = g.content_hash();
    let mut mats: Vec<IntMatrix> = (0..=k_max).map(|_| IntMatrix::zero(n)).collect();
    for u in 0..n {
        let counts = oracle_counts_from(g, u, k_max);
        for (j, row) in counts.into_iter().enumerate() {
            for (v, c) in row.into_iter().enumerate() {
                mats[j].set(u, v, BigInt::from(c));
            }
        }
    }
    Ok(mats
        .into_iter()
        .enumerate()
        .map(|(step, entries)| WalkCountMatrix {
            step,
            entries,
            graph_hash: hash.clone(),
        })
        .collect())
}
