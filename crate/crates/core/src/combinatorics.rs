//! Exact combinatorial kernels: binomials, central trinomial coefficients,
//! and the alternating-sum identity connecting them. Everything is
//! factorial-free — Pascal rows for moderate arguments, multiplicative
//! one-row recurrences with exact division for large ones.

use crate::BigCount;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Memoized Pascal triangle, rows `0..=max_row`.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    rows: Vec<Vec<BigCount>>,
}

impl BinomialTable {
    pub fn with_rows(max_row: usize) -> Self {
        let mut rows: Vec<Vec<BigCount>> = Vec::with_capacity(max_row + 1);
        rows.push(vec![BigCount::one()]);
        for n in 1..=max_row {
            let prev = &rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(BigCount::one());
            for k in 1..n {
                row.push(&prev[k - 1] + &prev[k]);
            }
            row.push(BigCount::one());
            rows.push(row);
        }
        BinomialTable { rows }
    }

    pub fn max_row(&self) -> usize {
        self.rows.len() - 1
    }

    /// `C(n, k)`; zero when `k > n`. Panics if `n` exceeds the table.
    pub fn binom(&self, n: usize, k: usize) -> BigCount {
        if k > n {
            return BigCount::zero();
        }
        self.rows[n][k].clone()
    }

    pub fn row(&self, n: usize) -> &[BigCount] {
        &self.rows[n]
    }
}

/// Central trinomial coefficient `T_n = [x^n] (1 + x + x^2)^n`, computed
/// from the equivalent finite sum `sum_k C(n, 2k) C(2k, k)` with one-row
/// multiplicative binomial updates: O(n) big-integer operations, no table.
pub fn central_trinomial(n: usize) -> BigCount {
    let mut acc = BigCount::one(); // j = 0 term
    let mut b = BigCount::one(); // C(n, 2j)
    let mut c = BigCount::one(); // C(2j, j)
    let mut j = 0usize;
    while 2 * (j + 1) <= n {
        j += 1;
        b = b * ((n - 2 * j + 2) as u64 * (n - 2 * j + 1) as u64)
            / ((2 * j - 1) as u64 * (2 * j) as u64);
        c = c * (2 * (2 * j - 1)) as u64 / j as u64;
        acc += &b * &c;
    }
    acc
}

/// `T_0..=T_{n_max}`, each recomputed from the defining sum (no chained
/// recurrence, so no error can propagate across entries).
pub fn trinomial_table(n_max: usize) -> Vec<BigCount> {
    (0..=n_max).map(central_trinomial).collect()
}

/// `T_0..=T_{n_max}` by literal polynomial expansion of `(1 + x + x^2)^n`,
/// harvesting the middle coefficient after each multiplication. Slower,
/// used as the oracle for the sum formula.
pub fn trinomial_by_poly_expansion(n_max: usize) -> Vec<BigCount> {
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(BigCount::one());
    // coefficients of (1 + x + x^2)^n, ascending degree
    let mut coeffs = vec![BigCount::one()];
    for n in 1..=n_max {
        let mut next = vec![BigCount::zero(); 2 * n + 1];
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            next[j] += c;
            next[j + 1] += c;
            next[j + 2] += c;
        }
        coeffs = next;
        out.push(coeffs[n].clone());
    }
    out
}

/// Result of checking `T_n^2 = sum_{k=0}^n C(n+k, 2k) C(2k, k)^2 (-3)^{n-k}`.
#[derive(Debug, Clone)]
pub struct SunCheck {
    pub n: usize,
    pub lhs: BigInt,
    pub rhs: BigInt,
    pub holds: bool,
}

/// The alternating sum `sum_{k=0}^n C(n+k, 2k) C(2k, k)^2 (-3)^{n-k}`.
pub fn sun_identity_rhs(n: usize) -> BigInt {
    let mut a = BigCount::one(); // C(n+k, 2k)
    let mut c = BigCount::one(); // C(2k, k)
    let mut pow3 = BigCount::from(3u32).pow(n as u32); // 3^(n-k)
    let mut negative = n % 2 == 1; // sign of (-3)^(n-k)
    let mut acc = BigInt::zero();
    for k in 0..=n {
        if k > 0 {
            a = a * ((n + k) as u64 * (n - k + 1) as u64)
                / ((2 * k - 1) as u64 * (2 * k) as u64);
            c = c * (2 * (2 * k - 1)) as u64 / k as u64;
            pow3 /= 3u32;
            negative = !negative;
        }
        let term = BigInt::from(&a * (&c * &c) * &pow3);
        if negative {
            acc -= term;
        } else {
            acc += term;
        }
    }
    acc
}

pub fn sun_identity_check(n: usize) -> SunCheck {
    let t = central_trinomial(n);
    let lhs = BigInt::from(&t * &t);
    let rhs = sun_identity_rhs(n);
    let holds = lhs == rhs;
    SunCheck { n, lhs, rhs, holds }
}

/// Leading asymptotic approximation
/// `T_n ≈ sqrt(3) / (2 sqrt(pi n)) * 3^n * (1 - 3/(16 n))`.
/// Overflows to infinity once `3^n` leaves f64 range (n > ~645); use
/// [`trinomial_asymptotic_over_3n`] for large `n`.
pub fn trinomial_asymptotic(n: usize) -> f64 {
    trinomial_asymptotic_over_3n(n) * 3f64.powi(n as i32)
}

/// The same approximation divided by `3^n`, safe for any `n >= 1`.
pub fn trinomial_asymptotic_over_3n(n: usize) -> f64 {
    let nf = n as f64;
    3f64.sqrt() / (2.0 * (std::f64::consts::PI * nf).sqrt()) * (1.0 - 3.0 / (16.0 * nf))
}

/// Relative error of the asymptotic approximation against the exact value,
/// compared in `T_n / 3^n` space so it's computable at any size.
pub fn trinomial_asymptotic_rel_error(n: usize) -> f64 {
    let exact = central_trinomial(n);
    let exact_scaled = big_ratio_to_f64(&exact, &BigCount::from(3u32).pow(n as u32));
    (trinomial_asymptotic_over_3n(n) / exact_scaled - 1.0).abs()
}

/// Round `num/den` to f64 without materializing either side as a float:
/// align bit lengths, divide with ~eighty guard bits, then scale. Intended
/// for ratios whose value is within f64 exponent range.
pub fn big_ratio_to_f64(num: &BigCount, den: &BigCount) -> f64 {
    assert!(!den.is_zero(), "zero denominator");
    if num.is_zero() {
        return 0.0;
    }
    let shift: i64 = den.bits() as i64 - num.bits() as i64 + 80;
    let scaled = if shift >= 0 {
        num << shift as usize
    } else {
        num >> (-shift) as usize
    };
    let q = scaled / den;
    q.to_f64().expect("quotient fits f64 after scaling") * 2f64.powi(-shift as i32)
}

/// Signed variant of [`big_ratio_to_f64`].
pub fn bigint_ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    let sign = if num.is_negative() != den.is_negative() {
        -1.0
    } else {
        1.0
    };
    sign * big_ratio_to_f64(num.magnitude(), den.magnitude())
}
