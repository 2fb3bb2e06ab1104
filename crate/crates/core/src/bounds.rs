//! Order bounds for tournaments with the weak/strong S_k property.
//!
//! * `lower_bound(k) = 2^(k-1)·(k+2) − 1`
//! * `f_upper(k)`: least `n` with `C(n,k)·(1 − 2^-k)^(n-k) < 1`
//! * `big_f_upper(k)`: least `n` with `2^k·C(n,k)·(1 − 2^-k)^(n-k) < 1`
//!
//! Inequalities are decided exactly. Multiplying through by `2^(k(n-k))`
//! turns them into integer comparisons
//! `[2^k]·C(n,k)·(2^k − 1)^(n-k) < 2^(k(n-k))`.
//! Small instances are compared as big integers. For large ones a log2-space
//! evaluation with an error bound far below its acceptance margin decides,
//! and any instance inside the margin falls back to the big-integer path.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qr::is_prime;

/// Instances with `k·(n−k)` above this many bits go through the log2 filter first.
const EXACT_BITS: u64 = 1 << 18;
/// Log2-space decisions closer to zero than this are recomputed exactly.
/// The evaluation error is below 1e-11 for every `k ≤ 62`, `n < 2^40`.
const FILTER_MARGIN: f64 = 1e-6;

pub fn lower_bound(k: u32) -> BigUint {
    assert!(k >= 1, "k must be at least 1");
    (BigUint::one() << (k - 1)) * BigUint::from(k + 2) - BigUint::one()
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc = C(n, i) here, so the division is exact
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn exact_below_one(n: u64, k: u32, strong: bool) -> bool {
    let e = n - k as u64;
    let base = (BigUint::one() << k) - BigUint::one();
    let mut lhs = binomial(n, k as u64) * base.pow(e as u32);
    if strong {
        lhs <<= k as usize;
    }
    let rhs = BigUint::one() << (k as u64 * e) as usize;
    lhs < rhs
}

/// `rhs − lhs` of the inequality in log2 space.
fn log2_margin(n: u64, k: u32, strong: bool) -> f64 {
    let e = (n - k as u64) as f64;
    let per_step = -(-(2f64).powi(-(k as i32))).ln_1p() / std::f64::consts::LN_2;
    let log2_binom: f64 = (0..k as u64).map(|i| ((n - i) as f64).log2() - ((i + 1) as f64).log2()).sum();
    e * per_step - log2_binom - if strong { k as f64 } else { 0.0 }
}

fn below_one(n: u64, k: u32, strong: bool) -> bool {
    debug_assert!(n >= k as u64);
    if k as u64 * (n - k as u64) <= EXACT_BITS {
        return exact_below_one(n, k, strong);
    }
    let margin = log2_margin(n, k, strong);
    if margin.abs() < FILTER_MARGIN {
        exact_below_one(n, k, strong)
    } else {
        margin > 0.0
    }
}

/// `C(n,k)·(1 − 2^-k)^(n-k) < 1`.
pub fn weak_inequality_holds(n: u64, k: u32) -> bool {
    below_one(n, k, false)
}

/// `2^k·C(n,k)·(1 − 2^-k)^(n-k) < 1`.
pub fn strong_inequality_holds(n: u64, k: u32) -> bool {
    below_one(n, k, true)
}

/// Least `n ≥ k` satisfying a predicate that is false up to some point and
/// true afterwards.
///
/// Both inequalities have this shape: `C(n,k)(1 − 2^-k)^(n-k)` equals 1 at
/// `n = k`, and the ratio of consecutive terms, `(n+1)/(n+1−k)·(1 − 2^-k)`,
/// decreases in `n`, so the sequence rises and then falls for good.
fn least_n(k: u32, pred: impl Fn(u64) -> bool) -> u64 {
    let mut lo = k as u64;
    let mut hi = 2 * lo;
    while !pred(hi) {
        lo = hi;
        hi *= 2;
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

pub fn f_upper(k: u32) -> u64 {
    assert!(k >= 1, "k must be at least 1");
    least_n(k, |n| weak_inequality_holds(n, k))
}

/// Upper bound for F(k), the strong counterpart of [`f_upper`].
pub fn big_f_upper(k: u32) -> u64 {
    assert!(k >= 1, "k must be at least 1");
    least_n(k, |n| strong_inequality_holds(n, k))
}

/// `2^(k+1)·C(n,k+1)·(1 − 2^-(k+1))^(n-k-1) < 1`: a random tournament of
/// order `n` has the strong S_{k+1} property with positive probability.
pub fn prob_condition(n: u64, k: u32) -> Result<bool> {
    if k < 1 || n <= k as u64 + 1 {
        return Err(Error::DomainError(format!("prob_condition needs n > k + 1 >= 2, got n = {n}, k = {k}")));
    }
    Ok(strong_inequality_holds(n, k + 1))
}

/// Smallest prime `p ≡ 3 (mod 4)` with `p > k²·2^(2k−2)`.
pub fn qr_threshold_prime(k: u32) -> Result<u64> {
    if k < 1 {
        return Err(Error::DomainError("k must be at least 1".into()));
    }
    let threshold = qr_threshold(k)?;
    // p ≡ 3 (mod 4) primes are dense enough that this never runs off u64
    // for thresholds below 2^62.
    let mut p = threshold + 1;
    while !(p % 4 == 3 && is_prime(p)) {
        p += 1;
    }
    Ok(p)
}

pub fn qr_threshold(k: u32) -> Result<u64> {
    let t = (k as u128).pow(2) << (2 * k as u128 - 2);
    if t >= 1 << 62 {
        return Err(Error::DomainError(format!("k = {k}: threshold exceeds 2^62")));
    }
    Ok(t as u64)
}

/// `log2(n) − 2·log2(log2(2n)) − 2`, the TD_min lower bound for the
/// random-tournament construction.
pub fn tdmin_lb_random(n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::DomainError(format!("n must be at least 2, got {n}")));
    }
    let n = n as f64;
    Ok(n.log2() - 2.0 * (2.0 * n).log2().log2() - 2.0)
}

/// `½·log2(p) − log2(log2(p)) − 1`, the TD_min lower bound for QR tournaments.
pub fn tdmin_lb_qr(p: u64) -> Result<f64> {
    if p < 3 {
        return Err(Error::DomainError(format!("p must be at least 3, got {p}")));
    }
    let p = p as f64;
    Ok(0.5 * p.log2() - p.log2().log2() - 1.0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsRow {
    pub k: u32,
    pub lower: u64,
    pub f_upper: u64,
    #[serde(rename = "F_upper")]
    pub big_f_upper: u64,
    pub qr_threshold: u64,
}

pub const MAX_TABLE_K: u32 = 16;

pub fn bounds_row(k: u32) -> Result<BoundsRow> {
    if !(1..=MAX_TABLE_K).contains(&k) {
        return Err(Error::DomainError(format!("k must be in 1..={MAX_TABLE_K}, got {k}")));
    }
    Ok(BoundsRow {
        k,
        lower: u64::try_from(lower_bound(k)).expect("k <= 16"),
        f_upper: f_upper(k),
        big_f_upper: big_f_upper(k),
        qr_threshold: qr_threshold_prime(k)?,
    })
}

pub fn bounds_table(k_max: u32) -> Result<Vec<BoundsRow>> {
    if !(1..=MAX_TABLE_K).contains(&k_max) {
        return Err(Error::DomainError(format!("k_max must be in 1..={MAX_TABLE_K}, got {k_max}")));
    }
    (1..=k_max).map(bounds_row).collect()
}

pub const CSV_HEADER: &str = "k,lower,f_upper,F_upper,qr_threshold";

pub fn table_to_csv(rows: &[BoundsRow]) -> String {
    let mut s = format!("{CSV_HEADER}\n");
    for r in rows {
        s.push_str(&format!("{},{},{},{},{}\n", r.k, r.lower, r.f_upper, r.big_f_upper, r.qr_threshold));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Linear scan from `k` with the big-integer comparison.
    fn scan(k: u32, strong: bool) -> u64 {
        (k as u64..).find(|&n| exact_below_one(n, k, strong)).unwrap()
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lower_bound(1), BigUint::from(2u32));
        assert_eq!(lower_bound(2), BigUint::from(7u32));
        assert_eq!(lower_bound(3), BigUint::from(19u32));
    }

    #[test]
    fn upper_bound_examples() {
        assert_eq!(f_upper(1), 3);
        assert_eq!(f_upper(2), 21);
        assert_eq!(big_f_upper(1), 5);
        assert_eq!(big_f_upper(2), 28);
    }

    #[test]
    fn binary_search_agrees_with_linear_scan() {
        for k in 1..=7 {
            assert_eq!(f_upper(k), scan(k, false), "k = {k}");
            assert_eq!(big_f_upper(k), scan(k, true), "k = {k}");
        }
    }

    #[test]
    fn log_filter_agrees_with_exact_near_boundary() {
        for k in 6..=10 {
            for strong in [false, true] {
                let n0 = if strong { big_f_upper(k) } else { f_upper(k) };
                for n in n0 - 3..=n0 + 3 {
                    let m = log2_margin(n, k, strong);
                    assert_eq!(m > 0.0, exact_below_one(n, k, strong), "k {k} n {n} margin {m}");
                }
            }
        }
    }

    #[test]
    fn boundary_value_one_is_not_below() {
        // k = 1: C(2,1)·(1/2)^1 = 1 exactly
        assert!(!weak_inequality_holds(2, 1));
        assert!(weak_inequality_holds(3, 1));
    }

    #[test]
    fn qr_threshold_examples() {
        assert_eq!(qr_threshold_prime(1), Ok(3));
        assert_eq!(qr_threshold_prime(2), Ok(19));
        assert_eq!(qr_threshold_prime(3), Ok(151));
        assert_eq!(qr_threshold_prime(4), Ok(1031));
        assert_eq!(qr_threshold_prime(5), Ok(6427));
    }

    #[test]
    fn prob_condition_tracks_big_f_upper() {
        for k in 1..=5 {
            let n = big_f_upper(k + 1);
            assert_eq!(prob_condition(n, k), Ok(true));
            if n - 1 > k as u64 + 1 {
                assert_eq!(prob_condition(n - 1, k), Ok(false));
            }
        }
        assert!(prob_condition(30, 1).unwrap());
        assert!(prob_condition(2, 1).is_err());
    }

    #[test]
    fn td_lower_bound_formulas() {
        let v = tdmin_lb_random(1024).unwrap();
        assert!((v - (10.0 - 2.0 * 11f64.log2() - 2.0)).abs() < 1e-12);
        assert!((v - 1.081_136_762_725_405).abs() < 1e-9);
        assert!((tdmin_lb_qr(151).unwrap() - (-0.236_469_409_378_648)).abs() < 1e-9);
        assert_eq!(tdmin_lb_random(2), Ok(-3.0));
        assert!(tdmin_lb_random(1).is_err());
        assert!(tdmin_lb_qr(2).is_err());
    }

    #[test]
    fn csv_rendering() {
        let rows = bounds_table(2).unwrap();
        assert_eq!(table_to_csv(&rows), "k,lower,f_upper,F_upper,qr_threshold\n1,2,3,5,3\n2,7,21,28,19\n");
        assert!(bounds_table(0).is_err());
        assert!(bounds_table(17).is_err());
    }
}
