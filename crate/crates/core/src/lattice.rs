//! Closed-walk counts and return-probability series on the integer
//! lattices `Z^d` (degree `2d`).
//!
//! Non-backtracking closed counts on `Z^2` come in three independent
//! exact forms (two alternating binomial sums and a difference of squared
//! central trinomial coefficients); general `d` uses the alternating
//! closed form in simple-walk counts. A dynamic-programming oracle over
//! `(offset, incoming direction)` states provides ground truth.

use crate::budget::Budgets;
use crate::combinatorics::{big_ratio_to_f64, bigint_ratio_to_f64, central_trinomial, BinomialTable};
use crate::error::{Error, Result};
use crate::{BigCount, BigRatio};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Simple closed walks of length `2n` on `Z^d` starting and ending at the
/// origin:
/// `d = 1`: `C(2n, n)`; `d = 2`: `C(2n, n)^2`;
/// `d >= 3`: `sum over k_1+...+k_d = n of (2n)! / prod (k_i!)^2`,
/// computed as `C(2n,n) * sum of multinomial(n; k)^2`.
pub fn simple_closed_count(d: usize, n: usize, table: &BinomialTable) -> Result<BigCount> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let central = table.binom(2 * n, n);
    Ok(match d {
        1 => central,
        2 => &central * &central,
        _ => central * sum_multinomial_squares(d, n, table),
    })
}

/// `sum over compositions (k_1..k_d) of n of (n! / prod k_i!)^2`.
fn sum_multinomial_squares(d: usize, n: usize, table: &BinomialTable) -> BigCount {
    fn rec(parts_left: usize, remaining: usize, partial: &BigCount, table: &BinomialTable) -> BigCount {
        if parts_left == 1 {
            // last part takes everything; multinomial factor C(remaining, remaining) = 1
            return partial * partial;
        }
        let mut acc = BigCount::zero();
        for k in 0..=remaining {
            let next = partial * table.binom(remaining, k);
            acc += rec(parts_left - 1, remaining - k, &next, table);
        }
        acc
    }
    rec(d, n, &BigCount::one(), table)
}

/// Total walks of length `k` from a vertex of `Z^d`: simple `(2d)^k`,
/// non-backtracking `2d (2d-1)^(k-1)` for `k >= 1`.
pub fn lattice_total_walks(d: usize, k: usize, nb: bool) -> BigCount {
    if k == 0 {
        return BigCount::one();
    }
    if nb {
        BigCount::from(2 * d) * BigCount::from(2 * d - 1).pow(k as u32 - 1)
    } else {
        BigCount::from(2 * d).pow(k as u32)
    }
}

/// Non-backtracking closed walks of length `2n` on `Z^2`, alternating
/// binomial sum (direct index form):
///
/// `sum_{i=0}^{n} (-3)^i C(2n-i, i) C(2n-2i, n-i)^2
///  - sum_{i=0}^{n-1} (-3)^i C(2n-i-2, i) C(2n-2i-2, n-i-1)^2`.
pub fn nb_closed_count_z2_sum(n: usize, table: &BinomialTable) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut first = BigInt::zero();
    let mut pow3 = BigInt::one();
    for i in 0..=n {
        let c = table.binom(2 * n - 2 * i, n - i);
        let term = BigInt::from(table.binom(2 * n - i, i) * (&c * &c)) * &pow3;
        first += term;
        pow3 *= -3;
    }
    let mut second = BigInt::zero();
    let mut pow3 = BigInt::one();
    for i in 0..n {
        let c = table.binom(2 * n - 2 * i - 2, n - i - 1);
        let term = BigInt::from(table.binom(2 * n - i - 2, i) * (&c * &c)) * &pow3;
        second += term;
        pow3 *= -3;
    }
    first - second
}

/// The same count with both sums reindexed by `k = n - i` (respectively
/// `k = n - 1 - i`), so each runs over ascending powers of `-3`:
///
/// `sum_{k=0}^{n} (-3)^{n-k} C(n+k, 2k) C(2k, k)^2
///  - sum_{k=0}^{n-1} (-3)^{n-1-k} C(n-1+k, 2k) C(2k, k)^2`.
pub fn nb_closed_count_z2_reindexed(n: usize, table: &BinomialTable) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let alternating = |m: usize| -> BigInt {
        let mut acc = BigInt::zero();
        let mut pow3 = BigInt::from(3).pow(m as u32);
        if m % 2 == 1 {
            pow3 = -pow3;
        }
        for k in 0..=m {
            let c = table.binom(2 * k, k);
            acc += BigInt::from(table.binom(m + k, 2 * k) * (&c * &c)) * &pow3;
            pow3 /= -3;
        }
        acc
    };
    alternating(n) - alternating(n - 1)
}

/// The trinomial form: NB closed walks of length `2n` on `Z^2` equal
/// `T_n^2 - T_{n-1}^2` for `n >= 1`.
pub fn nb_closed_count_z2_trinomial(n: usize) -> BigCount {
    if n == 0 {
        return BigCount::one();
    }
    let tn = central_trinomial(n);
    let tp = central_trinomial(n - 1);
    &tn * &tn - &tp * &tp
}

/// Non-backtracking closed walks on `Z^d` for every even length `2n`,
/// `n <= n_max`, via the regular closed form with `r = 2d` applied to the
/// simple closed counts:
///
/// `NB(2n) = sum_{i=0}^{n} (-1)^i C(2n-i, i) (2d-1)^i S(n-i)
///         - sum_{i=0}^{n-1} (-1)^i C(2n-i-2, i) (2d-1)^i S(n-i-1)`,
///
/// where `S(m)` counts simple closed walks of length `2m`.
pub fn nb_closed_counts_zd(d: usize, n_max: usize) -> Result<Vec<BigInt>> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let table = BinomialTable::with_rows(2 * n_max);
    let simple: Vec<BigCount> = (0..=n_max)
        .map(|m| simple_closed_count(d, m, &table))
        .collect::<Result<_>>()?;
    let r_minus_1 = BigInt::from(2 * d as i64 - 1);

    let mut out = Vec::with_capacity(n_max + 1);
    out.push(BigInt::one());
    for n in 1..=n_max {
        let mut acc = BigInt::zero();
        let mut sign_pow = BigInt::one(); // (-(2d-1))^i
        for i in 0..=n {
            acc += BigInt::from(table.binom(2 * n - i, i)) * &sign_pow * BigInt::from(simple[n - i].clone());
            sign_pow *= -&r_minus_1;
        }
        let mut sign_pow = BigInt::one();
        for i in 0..n {
            acc -= BigInt::from(table.binom(2 * n - i - 2, i)) * &sign_pow * BigInt::from(simple[n - i - 1].clone());
            sign_pow *= -&r_minus_1;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Single-length convenience wrapper over [`nb_closed_counts_zd`].
pub fn nb_closed_count_zd(d: usize, n: usize) -> Result<BigInt> {
    Ok(nb_closed_counts_zd(d, n)?.pop().unwrap())
}

/// Ground truth by forward dynamic programming over
/// `(position offset, incoming direction)` states: counts walks of length
/// `k` from the origin back to the origin, non-backtracking when `nb`.
/// State budget `d * (2k+1)^d` is enforced before allocation.
pub fn lattice_dp_oracle(d: usize, k: usize, nb: bool, budgets: &Budgets) -> Result<BigCount> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    budgets.check_dp_states(d, k)?;
    if k == 0 {
        return Ok(BigCount::one());
    }
    // a walk that returns within k steps never leaves the box [-k/2, k/2]^d
    let radius = k / 2;
    if radius == 0 {
        return Ok(BigCount::zero()); // k == 1: no closed walk of odd length
    }
    let side = 2 * radius + 1;
    let positions: usize = (0..d).try_fold(1usize, |acc, _| acc.checked_mul(side)).ok_or(
        Error::Capacity {
            what: "lattice DP states",
            needed: u128::MAX,
            budget: budgets.dp_states as u128,
        },
    )?;
    let dirs = 2 * d;
    let origin: usize = {
        // coordinates all equal to `radius` in mixed radix
        let mut idx = 0;
        for _ in 0..d {
            idx = idx * side + radius;
        }
        idx
    };
    let stride: Vec<usize> = (0..d).map(|axis| side.pow(axis as u32)).collect();

    // counts[pos * dirs + dir] after the current number of steps
    let mut cur = vec![BigCount::zero(); positions * dirs];
    let mut coords = vec![radius; d];
    for dir in 0..dirs {
        let axis = dir / 2;
        let up = dir % 2 == 0;
        if let Some(pos) = step_index(&coords, axis, up, side, &stride) {
            cur[pos * dirs + dir] = BigCount::one();
        }
    }
    let mut next = vec![BigCount::zero(); positions * dirs];
    for _step in 2..=k {
        for cell in next.iter_mut() {
            cell.set_zero();
        }
        for pos in 0..positions {
            decode(pos, side, d, &mut coords);
            for in_dir in 0..dirs {
                let c = &cur[pos * dirs + in_dir];
                if c.is_zero() {
                    continue;
                }
                let reverse = in_dir ^ 1;
                for out_dir in 0..dirs {
                    if nb && out_dir == reverse {
                        continue;
                    }
                    let axis = out_dir / 2;
                    let up = out_dir % 2 == 0;
                    if let Some(npos) = step_index(&coords, axis, up, side, &stride) {
                        next[npos * dirs + out_dir] += c;
                    }
                }
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }
    let mut total = BigCount::zero();
    for dir in 0..dirs {
        total += &cur[origin * dirs + dir];
    }
    Ok(total)
}

fn decode(mut idx: usize, side: usize, d: usize, coords: &mut [usize]) {
    for c in coords.iter_mut().take(d) {
        *c = idx % side;
        idx /= side;
    }
}

fn step_index(
    coords: &[usize],
    axis: usize,
    up: bool,
    side: usize,
    stride: &[usize],
) -> Option<usize> {
    let c = coords[axis];
    let nc = if up {
        if c + 1 >= side {
            return None;
        }
        c + 1
    } else {
        if c == 0 {
            return None;
        }
        c - 1
    };
    let mut idx = 0;
    for (i, &ci) in coords.iter().enumerate() {
        idx += if i == axis { nc } else { ci } * stride[i];
    }
    Some(idx)
}

/// Which family a return series describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum WalkKind {
    Simple,
    NonBacktracking,
}

/// One even length `2k` of a return series, exact and float views together.
#[derive(Debug, Clone)]
pub struct SeriesEntry {
    /// Half-length: the walk has `2k` steps.
    pub k: usize,
    pub count: BigCount,
    pub total: BigCount,
    pub prob: BigRatio,
    pub prob_f64: f64,
    /// Running sum of `prob_f64` from `k = 1` up to this entry.
    pub partial_sum: f64,
    /// Normalized comparison against the known leading asymptotic, where
    /// one exists (`p sqrt(pi k)` for d=1 simple, `p pi k` for d=2 simple,
    /// `p 2 pi k` for d=2 non-backtracking). Approaches 1.
    pub asymptotic_ratio: Option<f64>,
}

/// Exact return-probability series at the origin of `Z^d`, entries for
/// lengths `2, 4, ..., 2*k_max`. The length-0 term (probability 1, the
/// empty walk) is excluded from entries and partial sums by convention.
#[derive(Debug, Clone)]
pub struct ReturnSeries {
    pub dimension: usize,
    pub walk: WalkKind,
    pub entries: Vec<SeriesEntry>,
}

impl ReturnSeries {
    pub fn partial_sum(&self) -> f64 {
        self.entries.last().map_or(0.0, |e| e.partial_sum)
    }
}

fn series_from_counts(
    d: usize,
    walk: WalkKind,
    counts: Vec<BigInt>, // index k, length 2k, starting at k = 1
) -> ReturnSeries {
    let mut entries = Vec::with_capacity(counts.len());
    let mut partial = 0.0f64;
    for (idx, count) in counts.into_iter().enumerate() {
        let k = idx + 1;
        debug_assert!(!count.is_negative(), "closed-walk count must be nonnegative");
        let count = count.magnitude().clone();
        let total = lattice_total_walks(d, 2 * k, walk == WalkKind::NonBacktracking);
        let prob = BigRatio::new(BigInt::from(count.clone()), BigInt::from(total.clone()));
        let prob_f64 = big_ratio_to_f64(&count, &total);
        partial += prob_f64;
        let kf = k as f64;
        let asymptotic_ratio = match (walk, d) {
            (WalkKind::Simple, 1) => Some(prob_f64 * (std::f64::consts::PI * kf).sqrt()),
            (WalkKind::Simple, 2) => Some(prob_f64 * std::f64::consts::PI * kf),
            (WalkKind::NonBacktracking, 2) => {
                Some(prob_f64 * 2.0 * std::f64::consts::PI * kf)
            }
            _ => None,
        };
        entries.push(SeriesEntry {
            k,
            count,
            total,
            prob,
            prob_f64,
            partial_sum: partial,
            asymptotic_ratio,
        });
    }
    ReturnSeries {
        dimension: d,
        walk,
        entries,
    }
}

/// Exact non-backtracking return series on `Z^d` up to length `2*k_max`.
/// `d = 2` uses the trinomial form; other dimensions the alternating
/// closed form. In `d = 1` every entry is zero: after the first step a
/// non-backtracking walk on the line must keep its direction forever.
pub fn nb_return_series(d: usize, k_max: usize, budgets: &Budgets) -> Result<ReturnSeries> {
    if k_max > budgets.series_exact_k {
        return Err(Error::Capacity {
            what: "exact series length",
            needed: k_max as u128,
            budget: budgets.series_exact_k as u128,
        });
    }
    let counts: Vec<BigInt> = match d {
        0 => return Err(Error::InvalidArgument("dimension must be at least 1".into())),
        1 => vec![BigInt::zero(); k_max],
        2 => (1..=k_max)
            .map(|n| BigInt::from(nb_closed_count_z2_trinomial(n)))
            .collect(),
        _ => {
            let mut all = nb_closed_counts_zd(d, k_max)?;
            all.remove(0);
            all
        }
    };
    Ok(series_from_counts(d, WalkKind::NonBacktracking, counts))
}

/// Exact simple-walk return series on `Z^d` up to length `2*k_max`.
pub fn simple_return_series(d: usize, k_max: usize, budgets: &Budgets) -> Result<ReturnSeries> {
    if k_max > budgets.series_exact_k {
        return Err(Error::Capacity {
            what: "exact series length",
            needed: k_max as u128,
            budget: budgets.series_exact_k as u128,
        });
    }
    let table = BinomialTable::with_rows(2 * k_max);
    let counts: Vec<BigInt> = (1..=k_max)
        .map(|n| simple_closed_count(d, n, &table).map(BigInt::from))
        .collect::<Result<_>>()?;
    Ok(series_from_counts(d, WalkKind::Simple, counts))
}

/// Float-only non-backtracking return probabilities on `Z^2` for large
/// horizons: `p(2k)` for `k = 1..=k_max`. Works in `T_n / 3^n` space, so
/// no value ever under- or overflows; every operation is an addition of
/// positive terms, so the relative error stays near machine epsilon (the
/// exact series confirms this on the overlap). Intended for asymptotic
/// diagnostics beyond the exact-series budget.
pub fn nb_return_probs_f64_z2(k_max: usize) -> Vec<f64> {
    // scaled[j] = [x^j](1 + x + x^2)^n / 3^n, updated in place
    let mut scaled = vec![0.0f64; 2 * k_max + 1];
    scaled[0] = 1.0;
    let mut t_prev = 1.0f64; // T_0 / 3^0
    let mut out = Vec::with_capacity(k_max);
    for n in 1..=k_max {
        for j in (0..=2 * n).rev() {
            let a = scaled[j];
            let b = if j >= 1 { scaled[j - 1] } else { 0.0 };
            let c = if j >= 2 { scaled[j - 2] } else { 0.0 };
            scaled[j] = (a + b + c) / 3.0;
        }
        let t_n = scaled[n];
        // p(2n) = (T_n^2 - T_{n-1}^2) / (4 * 3^(2n-1)) in scaled space
        out.push((3.0 * t_n * t_n - t_prev * t_prev / 3.0) / 4.0);
        t_prev = t_n;
    }
    out
}

/// Exact conjecture probe on one length: non-backtracking vs simple
/// return probability at length `2k` in `Z^d`.
#[derive(Debug, Clone)]
pub struct ConjecturePoint {
    pub k: usize,
    pub p_nb: BigRatio,
    pub p_simple: BigRatio,
    /// Exact comparison `p_nb <= p_simple`.
    pub holds: bool,
    pub gap_f64: f64,
}

/// Compare the non-backtracking and simple return probabilities exactly
/// for every even length up to `2*k_max`. Points where the inequality
/// fails are reported with `holds = false`, never dropped.
pub fn conjecture_compare(d: usize, k_max: usize, budgets: &Budgets) -> Result<Vec<ConjecturePoint>> {
    let nb = nb_return_series(d, k_max, budgets)?;
    let simple = simple_return_series(d, k_max, budgets)?;
    Ok(nb
        .entries
        .into_iter()
        .zip(simple.entries)
        .map(|(n, s)| {
            let holds = n.prob <= s.prob;
            let gap = &s.prob - &n.prob;
            ConjecturePoint {
                k: n.k,
                p_nb: n.prob,
                p_simple: s.prob,
                holds,
                gap_f64: bigint_ratio_to_f64(gap.numer(), gap.denom()),
            }
        })
        .collect())
}
