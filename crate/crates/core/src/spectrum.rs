//! Eigenvalues of the simple transition matrix on discrete tori, and return
//! probabilities computed spectrally.
//!
//! On the torus `(Z/nZ)^d` the transition matrix `P = A/(2d)` diagonalizes
//! in the Fourier basis with eigenvalues
//! `λ_j = (1/d) Σ_i cos(2π j_i / n)`, `j ∈ {0..n-1}^d`.
//! Return probabilities follow by averaging over the spectrum:
//! `p(2k) = (1/N) Σ λ^{2k}` for the simple walk and
//! `p̃(2k) = (1/N) Σ p_{2k}(λ)` for the non-backtracking walk, using the
//! polynomial family from [`crate::chebyshev`]. While `2k < n` a closed
//! walk cannot wrap around the torus, so these equal the infinite-lattice
//! values exactly (up to f64 evaluation).

use crate::budget::Budgets;
use crate::error::{Error, Result};
use crate::graph::{FiniteGraph, TorusSpec};
use crate::matrix::IntMatrix;
use crate::nb_matrix;
use crate::BigRatio;
use num_bigint::BigInt;

/// Sorted (descending) spectrum of `P` on a torus.
#[derive(Debug, Clone)]
pub struct TorusSpectrum {
    pub spec: TorusSpec,
    /// All `n^d` eigenvalues of `P = A/(2d)`, descending, in `[-1, 1]`.
    pub eigenvalues: Vec<f64>,
}

/// Compute the full spectrum of the simple transition matrix on
/// `(Z/nZ)^d` from the cosine formula. Memory is `n^d` floats; the vertex
/// budget applies.
pub fn torus_spectrum(spec: TorusSpec, budgets: &Budgets) -> Result<TorusSpectrum> {
    let spec = TorusSpec::new(spec.n, spec.d)?;
    let count = spec.vertex_count();
    budgets.check_vertices(count)?;
    let count = count as usize;
    let n = spec.n;
    let d = spec.d;
    // one cosine per residue, reused across all d axes
    let cosines: Vec<f64> = (0..n)
        .map(|j| (2.0 * std::f64::consts::PI * j as f64 / n as f64).cos())
        .collect();
    let mut eigenvalues = Vec::with_capacity(count);
    let mut j = vec![0usize; d];
    loop {
        let sum: f64 = j.iter().map(|&ji| cosines[ji]).sum();
        eigenvalues.push(sum / d as f64);
        let mut axis = 0;
        loop {
            if axis == d {
                eigenvalues.sort_by(|a, b| b.partial_cmp(a).expect("cosine sums are finite"));
                return Ok(TorusSpectrum { spec, eigenvalues });
            }
            j[axis] += 1;
            if j[axis] < n {
                break;
            }
            j[axis] = 0;
            axis += 1;
        }
    }
}

/// Sum in a fixed balanced order, independent of chunking or thread count.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// Return probabilities at one even length.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SpectralEntry {
    /// Walk length `2k`.
    pub length: usize,
    pub simple: f64,
    pub nb: f64,
    /// Whether `2k < n`, i.e. the value coincides with the infinite lattice.
    pub lattice_exact: bool,
}

#[derive(Debug, Clone)]
pub struct SpectralSeries {
    pub spec: TorusSpec,
    pub entries: Vec<SpectralEntry>,
}

/// Average `λ^{2k}` and `p_{2k}(λ)` over the torus spectrum for
/// `k = 1..=k_max`. One pass of the three-term recurrence per eigenvalue,
/// summed pairwise in spectrum order, so results are bit-stable across runs.
pub fn spectral_return_probs(
    spectrum: &TorusSpectrum,
    k_max: usize,
    budgets: &Budgets,
) -> Result<SpectralSeries> {
    let spec = spectrum.spec;
    let r = 2 * spec.d;
    let n_eigs = spectrum.eigenvalues.len();
    let expected = spec.vertex_count();
    budgets.check_vertices(expected)?;
    if n_eigs as u128 != expected {
        return Err(Error::InvalidArgument(format!(
            "spectrum has {n_eigs} eigenvalues, torus has {expected} vertices"
        )));
    }
    let rf = r as f64;
    let lead = rf / (rf - 1.0);
    let tail = 1.0 / (rf - 1.0);
    let evs = &spectrum.eigenvalues;
    let mut p_prev: Vec<f64> = vec![1.0; n_eigs]; // p_0
    let mut p_cur: Vec<f64> = evs.clone(); // p_1
    let mut pow: Vec<f64> = vec![1.0; n_eigs]; // λ^(2k), updated per k
    let mut scratch: Vec<f64> = vec![0.0; n_eigs];
    let mut entries = Vec::with_capacity(k_max);
    for step in 2..=2 * k_max {
        for i in 0..n_eigs {
            scratch[i] = lead * evs[i] * p_cur[i] - tail * p_prev[i];
        }
        std::mem::swap(&mut p_prev, &mut p_cur);
        std::mem::swap(&mut p_cur, &mut scratch);
        if step % 2 == 0 {
            for i in 0..n_eigs {
                pow[i] *= evs[i] * evs[i];
            }
            let simple = pairwise_sum(&pow) / n_eigs as f64;
            let nb = pairwise_sum(&p_cur) / n_eigs as f64;
            entries.push(SpectralEntry {
                length: step,
                simple,
                nb,
                lattice_exact: step < spec.n,
            });
        }
    }
    Ok(SpectralSeries { spec, entries })
}

/// Exact return probabilities on a finite regular graph from matrix traces:
/// `p(k) = tr(A^k) / (N r^k)` and `p̃(k) = tr(Ã^k) / (N r (r-1)^(k-1))`,
/// for `k = 1..=k_max`. Ground truth for the spectral path.
pub fn exact_trace_probs(
    g: &FiniteGraph,
    k_max: usize,
    budgets: &Budgets,
) -> Result<Vec<(usize, BigRatio, BigRatio)>> {
    let r = g
        .regular_degree()
        .ok_or_else(|| Error::NotRegular("trace probabilities need a regular graph".into()))?;
    if r < 2 {
        return Err(Error::UnsupportedDegree(r));
    }
    let n = g.vertex_count();
    budgets.check_matrix_dim(n)?;
    let a = IntMatrix::adjacency(g);
    let nb = nb_matrix::nb_counts(g, k_max, budgets)?;
    let mut out = Vec::with_capacity(k_max);
    let mut a_pow = a.clone();
    for m in nb.iter().skip(1) {
        let k = m.step;
        if k > 1 {
            a_pow = a_pow.mul(&a);
        }
        let n_big = BigInt::from(n as u64);
        let simple_total = BigInt::from(r as u64).pow(k as u32);
        let simple = BigRatio::new(a_pow.trace(), &n_big * simple_total);
        let nb_total: BigInt = nb_matrix::regular_total_walks(r, k).into();
        let nb_prob = BigRatio::new(m.entries.trace(), &n_big * nb_total);
        out.push((k, simple, nb_prob));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::bigint_ratio_to_f64;
    use num_traits::ToPrimitive;

    fn default_budgets() -> Budgets {
        Budgets::default()
    }

    #[test]
    fn cycle_spectra_match_known_values() {
        // C_3: {1, -1/2, -1/2}
        let s = torus_spectrum(TorusSpec { n: 3, d: 1 }, &default_budgets()).unwrap();
        let expect = [1.0, -0.5, -0.5];
        for (a, b) in s.eigenvalues.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
        // C_4: {1, 0, 0, -1}
        let s = torus_spectrum(TorusSpec { n: 4, d: 1 }, &default_budgets()).unwrap();
        let expect = [1.0, 0.0, 0.0, -1.0];
        for (a, b) in s.eigenvalues.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn spectrum_invariants() {
        let spec = TorusSpec { n: 5, d: 2 };
        let s = torus_spectrum(spec, &default_budgets()).unwrap();
        assert_eq!(s.eigenvalues.len(), 25);
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14, "top eigenvalue is 1");
        assert!(s.eigenvalues[1] < 1.0 - 1e-6, "1 is simple on a connected torus");
        for w in s.eigenvalues.windows(2) {
            assert!(w[0] >= w[1]);
        }
        assert!(s.eigenvalues.iter().all(|l| (-1.0..=1.0).contains(l)));
        // trace of P is zero: no self-loops
        let trace: f64 = pairwise_sum(&s.eigenvalues);
        assert!(trace.abs() < 1e-10);
    }

    #[test]
    fn spectrum_matches_dense_eigendecomposition() {
        // cosine formula vs nalgebra on every torus with at most 64 vertices
        for spec in [
            TorusSpec { n: 12, d: 1 },
            TorusSpec { n: 4, d: 2 },
            TorusSpec { n: 5, d: 2 },
            TorusSpec { n: 3, d: 3 },
        ] {
            let g = FiniteGraph::torus(spec, &default_budgets()).unwrap();
            let n = g.vertex_count();
            let mut dense = nalgebra::DMatrix::<f64>::zeros(n, n);
            for u in 0..n {
                for &v in g.neighbors(u) {
                    dense[(u, v as usize)] += 1.0 / (2 * spec.d) as f64;
                }
            }
            let mut dense_eigs: Vec<f64> = dense
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .copied()
                .collect();
            dense_eigs.sort_by(|a, b| b.partial_cmp(a).unwrap());
            let s = torus_spectrum(spec, &default_budgets()).unwrap();
            for (a, b) in s.eigenvalues.iter().zip(&dense_eigs) {
                assert!((a - b).abs() < 1e-9, "{spec:?}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn spectral_simple_return_matches_trace() {
        // torus(7, 2): p(2) = 1/4 (come straight back), and deeper lengths
        // against exact A^k traces
        let spec = TorusSpec { n: 7, d: 2 };
        let s = torus_spectrum(spec, &default_budgets()).unwrap();
        let probs = spectral_return_probs(&s, 3, &default_budgets()).unwrap();
        assert!((probs.entries[0].simple - 0.25).abs() < 1e-12);
        let g = FiniteGraph::torus(spec, &default_budgets()).unwrap();
        let exact = exact_trace_probs(&g, 6, &default_budgets()).unwrap();
        for e in &probs.entries {
            let (_, ref simple, ref nb) = exact[e.length - 1];
            let simple_f = bigint_ratio_to_f64(simple.numer(), simple.denom());
            let nb_f = bigint_ratio_to_f64(nb.numer(), nb.denom());
            assert!((e.simple - simple_f).abs() < 1e-12, "length {}", e.length);
            assert!((e.nb - nb_f).abs() < 1e-12, "length {}", e.length);
        }
    }

    #[test]
    fn spectral_nb_matches_lattice_while_short() {
        // 2k < n means no wrap-around: torus values equal lattice values
        let spec = TorusSpec { n: 11, d: 2 };
        let s = torus_spectrum(spec, &default_budgets()).unwrap();
        let probs = spectral_return_probs(&s, 5, &default_budgets()).unwrap();
        let lattice = crate::lattice::nb_return_series(2, 5, &default_budgets()).unwrap();
        for (e, l) in probs.entries.iter().zip(&lattice.entries) {
            assert_eq!(e.length, 2 * l.k);
            assert_eq!(e.lattice_exact, e.length < 11);
            if e.lattice_exact {
                assert!(
                    (e.nb - l.prob_f64).abs() < 1e-12,
                    "length {}: {} vs {}",
                    e.length,
                    e.nb,
                    l.prob_f64
                );
            }
        }
    }

    #[test]
    fn odd_traces_vanish_on_bipartite_torus() {
        // torus(4, 2) is bipartite: tr(A^k) = 0 for odd k
        let g = FiniteGraph::torus(TorusSpec { n: 4, d: 2 }, &default_budgets()).unwrap();
        let exact = exact_trace_probs(&g, 5, &default_budgets()).unwrap();
        for (k, simple, _) in &exact {
            if k % 2 == 1 {
                assert!(simple.numer().to_i64() == Some(0), "k={k}");
            }
        }
    }

    #[test]
    fn trace_probs_reject_irregular_graphs() {
        let g = FiniteGraph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            exact_trace_probs(&g, 2, &default_budgets()),
            Err(Error::NotRegular(_))
        ));
    }
}
