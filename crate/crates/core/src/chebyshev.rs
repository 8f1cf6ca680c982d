//! The polynomial family `p_{r,k}` expressing non-backtracking transition
//! matrices of an `r`-regular graph as polynomials in the simple transition
//! matrix: `P̃^(k) = p_{r,k}(P)`, where
//!
//! `p_0 = 1`, `p_1 = x`,
//! `p_{k+2} = (r/(r-1)) x p_{k+1} - (1/(r-1)) p_k`.
//!
//! At `r = 2` this is exactly the Chebyshev recurrence, `p_k(cos t) = cos(k t)`.
//! The two-term linear recurrence has characteristic discriminant
//! `Δ(x) = r^2 x^2 - 4(r-1)`; its sign splits `[-1, 1]` at
//! `|x| = 2 sqrt(r-1) / r` into oscillatory decay (negative), a confluent
//! double root (zero), and a dominant-root regime (positive) with closed
//! forms for each.

use crate::error::{Error, Result};
use crate::BigRatio;
use num_bigint::BigInt;
use num_traits::One;

/// `|Δ|` below this dispatches evaluation to the confluent closed form.
/// Well inside f64 roundoff of the two-root formulas near the double root,
/// far above roundoff of `Δ` itself (which is exact to ~1e-15 here).
pub const CRITICAL_DISPATCH_EPS: f64 = 1e-9;

/// `|Δ|` below this marks the ill-conditioned band where closed-form vs
/// recurrence comparisons use the relaxed tolerance.
pub const NEAR_CRITICAL_BAND: f64 = 1e-6;

/// Comparison tolerance (relative, floored at 1) outside the band.
pub const AGREEMENT_TOL_STRICT: f64 = 1e-9;

/// Comparison tolerance inside the band.
pub const AGREEMENT_TOL_NEAR_CRITICAL: f64 = 1e-6;

/// The constant `C_r` in the below-threshold eigenvalue bound
/// `|p_k(λ)| <= C_r k (r-1)^{-k/2}`. Two suffices: on the critical line
/// the exact value is `(r-1)^{-k/2} (1 + k(r-2)/r)` and
/// `1 + k(r-2)/r <= 2k` for every `r >= 2, k >= 1`; the sweep confirms the
/// same constant across the subcritical range.
pub const BOUND_CONSTANT: f64 = 2.0;

/// Parameter pair of the family: degree of the graph and walk length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PolyParams {
    pub r: usize,
    pub k: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

/// Where an evaluation point sits relative to `|x| = 2 sqrt(r-1) / r`.
#[derive(Debug, Clone, Copy)]
pub struct RegimeClassification {
    pub x: f64,
    pub discriminant: f64,
    pub threshold: f64,
    pub regime: Regime,
    /// `theta = arccos(r x / (2 sqrt(r-1)))`, defined in the subcritical
    /// regime where the roots are complex.
    pub theta: Option<f64>,
}

fn check_r(r: usize) -> Result<()> {
    if r < 2 {
        return Err(Error::UnsupportedDegree(r));
    }
    Ok(())
}

/// Classify `x` by the sign of `Δ(x)`, treating `|Δ| < CRITICAL_DISPATCH_EPS`
/// as the confluent case.
pub fn classify(r: usize, x: f64) -> Result<RegimeClassification> {
    check_r(r)?;
    let rf = r as f64;
    let disc = rf * rf * x * x - 4.0 * (rf - 1.0);
    let threshold = 2.0 * (rf - 1.0).sqrt() / rf;
    let regime = if disc.abs() < CRITICAL_DISPATCH_EPS {
        Regime::Critical
    } else if disc < 0.0 {
        Regime::Subcritical
    } else {
        Regime::Supercritical
    };
    let theta = (regime == Regime::Subcritical)
        .then(|| (rf * x / (2.0 * (rf - 1.0).sqrt())).clamp(-1.0, 1.0).acos());
    Ok(RegimeClassification {
        x,
        discriminant: disc,
        threshold,
        regime,
        theta,
    })
}

/// Evaluate `p_{r,k}(x)` by the recurrence in f64.
pub fn p_eval_f64(r: usize, k: usize, x: f64) -> Result<f64> {
    check_r(r)?;
    let rf = r as f64;
    let lead = rf / (rf - 1.0);
    let tail = 1.0 / (rf - 1.0);
    let mut prev = 1.0; // p_0
    let mut cur = x; // p_1
    if k == 0 {
        return Ok(prev);
    }
    for _ in 2..=k {
        let next = lead * x * cur - tail * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Evaluate `p_{r,k}(x)` exactly over the rationals.
pub fn p_eval_rational(r: usize, k: usize, x: &BigRatio) -> Result<BigRatio> {
    check_r(r)?;
    let lead = BigRatio::new(BigInt::from(r as i64), BigInt::from(r as i64 - 1));
    let tail = BigRatio::new(BigInt::one(), BigInt::from(r as i64 - 1));
    let mut prev = BigRatio::one();
    let mut cur = x.clone();
    if k == 0 {
        return Ok(prev);
    }
    for _ in 2..=k {
        let next = &lead * x * &cur - &tail * &prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Evaluate `p_{r,k}(x)` by the regime closed forms (`|x| <= 1`):
///
/// * supercritical: `(1/2)[(1 + x(r-2)/sqrt(Δ)) ρ_+^k + (1 - x(r-2)/sqrt(Δ)) ρ_-^k]`
///   with `ρ_± = (r x ± sqrt(Δ)) / (2(r-1))`;
/// * subcritical: `(r-1)^{-k/2} (cos(kθ) + (r-2) x sin(kθ) / sqrt(-Δ))`;
/// * critical: `±(r-1)^{-k/2} (1 + k (r-2)/r)`, the sign from the parity
///   `p_k(-x) = (-1)^k p_k(x)` when `x` is the negative threshold.
pub fn p_eval_closed_form(r: usize, k: usize, x: f64) -> Result<f64> {
    if x.abs() > 1.0 + 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "closed forms cover |x| <= 1, got {x}"
        )));
    }
    let class = classify(r, x)?;
    let rf = r as f64;
    let kf = k as f64;
    Ok(match class.regime {
        Regime::Supercritical => {
            let sq = class.discriminant.sqrt();
            let rho_plus = (rf * x + sq) / (2.0 * (rf - 1.0));
            let rho_minus = (rf * x - sq) / (2.0 * (rf - 1.0));
            let skew = x * (rf - 2.0) / sq;
            0.5 * ((1.0 + skew) * rho_plus.powi(k as i32)
                + (1.0 - skew) * rho_minus.powi(k as i32))
        }
        Regime::Subcritical => {
            let theta = class.theta.expect("subcritical classification carries theta");
            let damp = (rf - 1.0).powf(-kf / 2.0);
            let skew = (rf - 2.0) * x / (-class.discriminant).sqrt();
            damp * ((kf * theta).cos() + skew * (kf * theta).sin())
        }
        Regime::Critical => {
            let sign = if x < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
            sign * (rf - 1.0).powf(-kf / 2.0) * (1.0 + kf * (rf - 2.0) / rf)
        }
    })
}

/// One eigenvalue-bound check. `lhs = |p_k(λ)|`; `rhs` is `|λ|^k` above the
/// threshold and `C_r k (r-1)^{-k/2}` at or below it. The verdict is
/// decided in exact rational arithmetic (both sides squared), so boundary
/// points like `λ = ±1` pass with an exact zero margin instead of noise.
#[derive(Debug, Clone, Copy)]
pub struct BoundCheck {
    pub r: usize,
    pub k: usize,
    pub lambda: f64,
    pub above_threshold: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub pass: bool,
}

/// Exact check of the regime-appropriate eigenvalue bound at one point.
/// `λ` is interpreted exactly as the rational its f64 bits denote.
pub fn check_eig_bound(r: usize, k: usize, lambda: f64, c_r: f64) -> Result<BoundCheck> {
    check_r(r)?;
    if k == 0 {
        return Err(Error::InvalidArgument("bound checks need k >= 1".into()));
    }
    if lambda.abs() > 1.0 {
        return Err(Error::InvalidArgument(format!(
            "eigenvalues of a transition matrix lie in [-1, 1], got {lambda}"
        )));
    }
    let lam = BigRatio::from_float(lambda)
        .ok_or_else(|| Error::InvalidArgument("eigenvalue must be finite".into()))?;
    let c = BigRatio::from_float(c_r)
        .ok_or_else(|| Error::InvalidArgument("bound constant must be finite".into()))?;
    let p = p_eval_rational(r, k, &lam)?;
    let p_sq = &p * &p;
    let lam_sq = &lam * &lam;
    // threshold^2 = 4(r-1)/r^2, compared exactly
    let thr_sq = BigRatio::new(BigInt::from(4 * (r as i64 - 1)), BigInt::from((r * r) as i64));
    let above = lam_sq > thr_sq;
    let (pass, rhs_f64) = if above {
        // |p_k(λ)| <= |λ|^k  <=>  p^2 <= λ^(2k)
        let rhs = pow_rational(&lam_sq, k);
        (p_sq <= rhs, lambda.abs().powi(k as i32))
    } else {
        // |p_k(λ)| <= C k (r-1)^{-k/2}  <=>  p^2 (r-1)^k <= C^2 k^2
        let growth = BigRatio::from_integer(BigInt::from(r as i64 - 1));
        let lhs_scaled = p_sq * pow_rational(&growth, k);
        let rhs = &c * &c * BigRatio::from_integer(BigInt::from((k * k) as i64));
        (
            lhs_scaled <= rhs,
            c_r * k as f64 * (r as f64 - 1.0).powf(-(k as f64) / 2.0),
        )
    };
    let lhs_f64 = crate::combinatorics::bigint_ratio_to_f64(p.numer(), p.denom()).abs();
    Ok(BoundCheck {
        r,
        k,
        lambda,
        above_threshold: above,
        lhs: lhs_f64,
        rhs: rhs_f64,
        margin: rhs_f64 - lhs_f64,
        pass,
    })
}

fn pow_rational(base: &BigRatio, k: usize) -> BigRatio {
    let mut acc = BigRatio::one();
    let mut sq = base.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        sq = &sq * &sq;
        e >>= 1;
    }
    acc
}

/// Outcome of sweeping the bound over an `x` grid for all `k <= k_max`.
/// The fast path is the f64 recurrence; any point whose float margin falls
/// below `1e-9` is re-decided by [`check_eig_bound`]'s exact arithmetic
/// (counted in `escalations`).
#[derive(Debug, Clone, serde::Serialize)]
pub struct SweepSummary {
    pub r: usize,
    pub k_max: usize,
    pub grid: usize,
    pub checked: u64,
    pub failures: u64,
    pub escalations: u64,
    /// Minimum observed `rhs - |p|` above the threshold (exact zeros at
    /// `λ = ±1` included), and at or below it.
    pub min_margin_above: f64,
    pub min_margin_below: f64,
}

/// Grid of evaluation points: `grid` equispaced values covering [-1, 1],
/// plus both critical points `±2 sqrt(r-1) / r` so the confluent branch is
/// always exercised.
pub fn sweep_grid(r: usize, grid: usize) -> Vec<f64> {
    let mut xs: Vec<f64> = (0..grid)
        .map(|i| -1.0 + 2.0 * i as f64 / (grid - 1) as f64)
        .collect();
    let thr = 2.0 * ((r as f64) - 1.0).sqrt() / r as f64;
    xs.push(thr);
    xs.push(-thr);
    xs
}

/// Sweep the eigenvalue bound for one degree. Exhaustive over the grid and
/// every `1 <= k <= k_max`; failures are counted, never suppressed.
pub fn bound_sweep(r: usize, k_max: usize, grid: usize, c_r: f64) -> Result<SweepSummary> {
    check_r(r)?;
    if grid < 2 {
        return Err(Error::InvalidArgument("sweep grid needs at least 2 points".into()));
    }
    let rf = r as f64;
    let lead = rf / (rf - 1.0);
    let tail = 1.0 / (rf - 1.0);
    let thr_sq = 4.0 * (rf - 1.0) / (rf * rf);
    let mut summary = SweepSummary {
        r,
        k_max,
        grid,
        checked: 0,
        failures: 0,
        escalations: 0,
        min_margin_above: f64::INFINITY,
        min_margin_below: f64::INFINITY,
    };
    let damp = 1.0 / (rf - 1.0).sqrt();
    for x in sweep_grid(r, grid) {
        let above = x * x > thr_sq;
        let mut prev = 1.0f64;
        let mut cur = x;
        let mut lam_pow = x.abs(); // |λ|^k
        let mut damp_pow = damp; // (r-1)^(-k/2)
        for k in 1..=k_max {
            if k >= 2 {
                let next = lead * x * cur - tail * prev;
                prev = cur;
                cur = next;
                lam_pow *= x.abs();
                damp_pow *= damp;
            }
            let rhs = if above {
                lam_pow
            } else {
                c_r * k as f64 * damp_pow
            };
            let mut margin = rhs - cur.abs();
            summary.checked += 1;
            let mut pass = margin >= 0.0;
            // Relative closeness decides escalation: both sides shrink like
            // (r-1)^(-k/2) below the threshold, so an absolute cutoff would
            // escalate every deep-k point for nothing.
            let scale = rhs.abs().max(cur.abs()).max(f64::MIN_POSITIVE);
            if margin / scale < 1e-9 {
                // too close to call in f64: the exact path decides
                summary.escalations += 1;
                let exact = check_eig_bound(r, k, x, c_r)?;
                pass = exact.pass;
                if pass && margin < 0.0 {
                    margin = 0.0;
                }
            }
            if !pass {
                summary.failures += 1;
            }
            if above {
                summary.min_margin_above = summary.min_margin_above.min(margin);
            } else {
                summary.min_margin_below = summary.min_margin_below.min(margin);
            }
        }
    }
    Ok(summary)
}

/// Row-level bound report for export: every `(k, x)` pair on the grid,
/// each verdict exact. One incremental rational recurrence per grid point.
pub fn bound_check_grid(r: usize, k_max: usize, grid: usize, c_r: f64) -> Result<Vec<BoundCheck>> {
    check_r(r)?;
    if grid < 2 {
        return Err(Error::InvalidArgument("sweep grid needs at least 2 points".into()));
    }
    let c = BigRatio::from_float(c_r)
        .ok_or_else(|| Error::InvalidArgument("bound constant must be finite".into()))?;
    let c_sq = &c * &c;
    let lead = BigRatio::new(BigInt::from(r as i64), BigInt::from(r as i64 - 1));
    let tail = BigRatio::new(BigInt::one(), BigInt::from(r as i64 - 1));
    let thr_sq = BigRatio::new(BigInt::from(4 * (r as i64 - 1)), BigInt::from((r * r) as i64));
    let growth = BigInt::from(r as i64 - 1);
    let mut rows = Vec::with_capacity((grid + 2) * k_max);
    for x in sweep_grid(r, grid) {
        let lam = BigRatio::from_float(x)
            .ok_or_else(|| Error::InvalidArgument("grid point must be finite".into()))?;
        let lam_sq = &lam * &lam;
        let above = lam_sq > thr_sq;
        let mut prev = BigRatio::one();
        let mut cur = lam.clone();
        let mut lam_pow2k = lam_sq.clone(); // λ^(2k)
        let mut growth_pow = growth.clone(); // (r-1)^k
        let damp = 1.0 / ((r as f64) - 1.0).sqrt();
        let mut rhs_f64 = if above { x.abs() } else { c_r * damp };
        for k in 1..=k_max {
            if k >= 2 {
                let next = &lead * &lam * &cur - &tail * &prev;
                prev = cur;
                cur = next;
                lam_pow2k *= &lam_sq;
                growth_pow *= &growth;
                rhs_f64 = if above {
                    rhs_f64 * x.abs()
                } else {
                    c_r * k as f64 * damp.powi(k as i32)
                };
            }
            let p_sq = &cur * &cur;
            let pass = if above {
                p_sq <= lam_pow2k
            } else {
                p_sq * &growth_pow
                    <= &c_sq * BigRatio::from_integer(BigInt::from((k * k) as i64))
            };
            let lhs_f64 = crate::combinatorics::bigint_ratio_to_f64(cur.numer(), cur.denom()).abs();
            rows.push(BoundCheck {
                r,
                k,
                lambda: x,
                above_threshold: above,
                lhs: lhs_f64,
                rhs: rhs_f64,
                margin: rhs_f64 - lhs_f64,
                pass,
            });
        }
    }
    Ok(rows)
}

/// Worst observed deviation between the closed forms and the recurrence,
/// normalized by the applicable tolerance: strict `1e-9` relative (floored
/// at magnitude 1) away from the critical band `|Δ| < 1e-6`, absolute
/// `1e-6` inside it. A return value `<= 1` means every point agreed.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct AgreementSummary {
    pub r: usize,
    pub k_max: usize,
    pub grid: usize,
    /// max |closed - recurrence| / (1e-9 * max(1, |recurrence|)) outside the band
    pub worst_strict: f64,
    /// max |closed - recurrence| / 1e-6 inside the band
    pub worst_near_critical: f64,
}

/// Compare closed-form against recurrence evaluation over a grid
/// (including both critical points) for all `k <= k_max`.
pub fn closed_form_agreement(r: usize, k_max: usize, grid: usize) -> Result<AgreementSummary> {
    check_r(r)?;
    let mut out = AgreementSummary {
        r,
        k_max,
        grid,
        worst_strict: 0.0,
        worst_near_critical: 0.0,
    };
    for x in sweep_grid(r, grid) {
        let class = classify(r, x)?;
        let near = class.discriminant.abs() < NEAR_CRITICAL_BAND;
        for k in 0..=k_max {
            let rec = p_eval_f64(r, k, x)?;
            let closed = p_eval_closed_form(r, k, x)?;
            let err = (closed - rec).abs();
            if near {
                out.worst_near_critical = out.worst_near_critical.max(err / AGREEMENT_TOL_NEAR_CRITICAL);
            } else {
                let tol = AGREEMENT_TOL_STRICT * rec.abs().max(1.0);
                out.worst_strict = out.worst_strict.max(err / tol);
            }
        }
    }
    Ok(out)
}

/// Max deviation of `p_{2,k}(cos t)` from `cos(k t)` over a uniform grid of
/// `t` in `[0, pi]` for all `k <= k_max`: the Chebyshev degeneration.
pub fn chebyshev_degeneration_max_err(k_max: usize, grid: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..grid {
        let t = std::f64::consts::PI * i as f64 / (grid - 1) as f64;
        let x = t.cos();
        for k in 0..=k_max {
            let p = p_eval_f64(2, k, x)?;
            worst = worst.max((p - (k as f64 * t).cos()).abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn base_cases_and_one_point() {
        assert_eq!(p_eval_f64(4, 0, 0.3).unwrap(), 1.0);
        assert_eq!(p_eval_f64(4, 1, 0.3).unwrap(), 0.3);
        // p_2(1/2) at r=4: (4/3)(1/2)(1/2) - 1/3 = 0
        let v = p_eval_f64(4, 2, 0.5).unwrap();
        assert!(v.abs() < 1e-15, "{v}");
        let exact = p_eval_rational(4, 2, &BigRatio::new(BigInt::from(1), BigInt::from(2))).unwrap();
        assert!(exact.is_zero());
    }

    #[test]
    fn value_at_one_is_always_one() {
        let one = BigRatio::one();
        for r in 2..=8 {
            for k in 0..=40 {
                assert!(p_eval_rational(r, k, &one).unwrap().is_one(), "r={r} k={k}");
            }
        }
    }

    #[test]
    fn parity_under_negation() {
        let x = BigRatio::new(BigInt::from(3), BigInt::from(7));
        for r in [3usize, 5] {
            for k in 0..=15 {
                let pos = p_eval_rational(r, k, &x).unwrap();
                let neg = p_eval_rational(r, k, &(-&x)).unwrap();
                let expect = if k % 2 == 1 { -pos.clone() } else { pos.clone() };
                assert_eq!(neg, expect, "r={r} k={k}");
            }
        }
    }

    #[test]
    fn regime_classification_boundaries() {
        let c = classify(4, 0.9).unwrap();
        assert_eq!(c.regime, Regime::Supercritical);
        assert!((c.threshold - 3.0f64.sqrt() / 2.0).abs() < 1e-15);
        let c = classify(4, 0.5).unwrap();
        assert_eq!(c.regime, Regime::Subcritical);
        assert!(c.theta.is_some());
        let c = classify(4, 3.0f64.sqrt() / 2.0).unwrap();
        assert_eq!(c.regime, Regime::Critical);
        assert!(classify(1, 0.5).is_err());
    }

    #[test]
    fn critical_value_matches_hand_computation() {
        // r=4, k=3 at the threshold: (5/2) * 3^(-3/2)
        let thr = 3.0f64.sqrt() / 2.0;
        let v = p_eval_closed_form(4, 3, thr).unwrap();
        let expect = 2.5 * 3.0f64.powf(-1.5);
        assert!((v - expect).abs() < 1e-12, "{v} vs {expect}");
        // recurrence agrees
        let rec = p_eval_f64(4, 3, thr).unwrap();
        assert!((rec - expect).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_agree_with_recurrence_spot() {
        for r in [3usize, 4, 7] {
            let s = closed_form_agreement(r, 60, 201).unwrap();
            assert!(s.worst_strict <= 1.0, "r={r} strict {}", s.worst_strict);
            assert!(s.worst_near_critical <= 1.0, "r={r} near {}", s.worst_near_critical);
        }
    }

    #[test]
    fn chebyshev_degeneration_at_degree_two() {
        let err = chebyshev_degeneration_max_err(50, 301).unwrap();
        assert!(err < 1e-10, "max deviation {err}");
    }

    #[test]
    fn bound_check_at_threshold_example() {
        // r=4, k=1, λ = sqrt(3)/2: |p_1| = λ <= 2 * 1 / sqrt(3)
        let chk = check_eig_bound(4, 1, 3.0f64.sqrt() / 2.0, BOUND_CONSTANT).unwrap();
        assert!(!chk.above_threshold);
        assert!(chk.pass);
        assert!((chk.margin - (2.0 / 3.0f64.sqrt() - 3.0f64.sqrt() / 2.0)).abs() < 1e-12);
    }

    #[test]
    fn bound_exact_at_lambda_one() {
        for r in 3..=6 {
            for k in [1usize, 7, 40] {
                let chk = check_eig_bound(r, k, 1.0, BOUND_CONSTANT).unwrap();
                assert!(chk.above_threshold);
                assert!(chk.pass, "r={r} k={k}");
                assert!(chk.margin.abs() < 1e-12, "exact equality at λ=1");
            }
        }
    }

    #[test]
    fn sweep_passes_with_constant_two() {
        for r in [3usize, 6] {
            let s = bound_sweep(r, 60, 401, BOUND_CONSTANT).unwrap();
            assert_eq!(s.failures, 0, "r={r}");
            assert!(s.min_margin_above >= 0.0);
            assert!(s.min_margin_below >= 0.0);
        }
    }

    #[test]
    fn undersized_constant_is_caught() {
        // C = 1 fails: already at k=1 near the threshold |p_1| = |λ| can
        // exceed (r-1)^(-1/2)
        let s = bound_sweep(4, 10, 101, 1.0).unwrap();
        assert!(s.failures > 0);
    }

    #[test]
    fn rejects_out_of_range_arguments() {
        assert!(p_eval_closed_form(4, 3, 1.5).is_err());
        assert!(check_eig_bound(4, 0, 0.5, 2.0).is_err());
        assert!(check_eig_bound(4, 3, 1.5, 2.0).is_err());
        assert!(p_eval_f64(1, 3, 0.5).is_err());
    }
}
