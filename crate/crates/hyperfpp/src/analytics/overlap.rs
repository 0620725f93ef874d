//! Exact counts of paths sharing edges with a reference path, and the three
//! closed-form bounds used on those counts.
//!
//! Two paths share an edge only at equal step indices, so against the
//! reference path `0, 1, …, n-1` the overlap profile of a permutation is read
//! off in one pass. `middle` classifies by shared edges with the first and
//! last step excluded; `total` includes them. Both tables are exact integers.
//!
//! The bounds split by overlap regime around the threshold
//! `n - 5e(n+3)^(2/3)`: a vanishing bracket factor for small overlap, a
//! `2 n^6 (n-k)!` bound in the moderate regime, and a worst-case
//! `C(n-2,k) (n-k-1)!` count that is valid everywhere.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::numeric::ln_factorial;

/// Exhaustive tables walk all `n!` permutations.
pub const MAX_TABLE_DIMENSION: u32 = 10;

/// Exact overlap counts against the reference path. `middle[k]` counts paths
/// sharing exactly `k` of the `n-2` middle edges (`k = 0..=n-2`); `total[k]`
/// counts paths sharing exactly `k` edges overall (`k = 0..=n`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OverlapTable {
    pub n: u32,
    pub middle: Vec<BigUint>,
    pub total: Vec<BigUint>,
}

impl OverlapTable {
    pub fn middle_count(&self, k: u32) -> &BigUint {
        &self.middle[k as usize]
    }

    pub fn total_count(&self, k: u32) -> &BigUint {
        &self.total[k as usize]
    }
}

/// Count, over all `n!` permutations, how many share exactly `k` edges with
/// the reference path, classified both with and without the boundary steps.
pub fn overlap_table(n: u32) -> Result<OverlapTable> {
    if !(3..=MAX_TABLE_DIMENSION).contains(&n) {
        return Err(Error::Resource {
            what: "overlap table enumeration",
            n,
            cap: MAX_TABLE_DIMENSION,
            detail: "exhaustive classification of n! permutations".into(),
        });
    }
    let len = n as usize;
    let mut middle = vec![0u64; len - 1];
    let mut total = vec![0u64; len + 1];

    let mut perm: Vec<u8> = (0..n as u8).collect();
    let mut counters = vec![0usize; len];
    classify(&perm, &mut middle, &mut total);
    // Heap's algorithm, iterative form
    let mut i = 0;
    while i < len {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            classify(&perm, &mut middle, &mut total);
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }

    Ok(OverlapTable {
        n,
        middle: middle.into_iter().map(BigUint::from).collect(),
        total: total.into_iter().map(BigUint::from).collect(),
    })
}

#[inline]
fn classify(perm: &[u8], middle: &mut [u64], total: &mut [u64]) {
    let n = perm.len();
    let mut mask: u64 = 0;
    let mut mid = 0usize;
    let mut tot = 0usize;
    for (i, &d) in perm.iter().enumerate() {
        // shared step: same direction and same prefix set as the reference
        if usize::from(d) == i && mask == (1u64 << i) - 1 {
            tot += 1;
            if i > 0 && i < n - 1 {
                mid += 1;
            }
        }
        mask |= 1 << d;
    }
    middle[mid] += 1;
    total[tot] += 1;
}

/// Worst-case bound `C(n-2, k) * (n-k-1)! = (n-2)! (n-k-1) / k!` on the
/// number of paths sharing `k >= 1` middle edges; exact integer, valid for
/// every `n`, tight at full overlap `k = n-2`.
pub fn overlap_worst_case_bound(n: u32, k: u32) -> Result<BigUint> {
    if k < 1 || k > n.saturating_sub(2) {
        return Err(Error::Domain(format!(
            "worst-case bound needs 1 <= k <= n-2, got n={n} k={k}"
        )));
    }
    Ok(binomial_big(n - 2, k) * factorial_big(n - k - 1))
}

/// A log-space bound value and whether the regime it was derived for applies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegimeValue {
    pub log_value: f64,
    pub in_regime: bool,
}

/// `ln(2 n^6 (n-k)!)`, the moderate-overlap bound. Derived for
/// `k + 2 <= n - 5e(n+3)^(2/3)`; outside that the value is still returned,
/// flagged out-of-regime.
pub fn overlap_midrange_bound_log(n: u64, k: u64) -> Result<RegimeValue> {
    if k > n {
        return Err(Error::Domain(format!("need k <= n, got n={n} k={k}")));
    }
    let log_value = 2f64.ln() + 6.0 * (n as f64).ln() + ln_factorial(n - k);
    let in_regime = (k + 2) as f64 <= overlap_regime_threshold(n as f64);
    Ok(RegimeValue {
        log_value,
        in_regime,
    })
}

/// The square-bracket factor `[(3k)^2 (n-2) / (n-4k)^3]^k` of the
/// small-overlap bound; it vanishes as `n` grows, uniformly in `k = o(n)`.
pub fn small_overlap_bracket(n: f64, k: u32) -> Result<f64> {
    if k == 0 {
        return Ok(1.0); // empty power
    }
    let kf = f64::from(k);
    if 4.0 * kf >= n {
        return Err(Error::Domain(format!(
            "bracket needs 4k < n, got n={n} k={k}"
        )));
    }
    let log = kf * ((9.0 * kf * kf).ln() + (n - 2.0).ln() - 3.0 * (n - 4.0 * kf).ln());
    Ok(log.exp())
}

/// Crossover `n - 5e(n+3)^(2/3)` between the moderate- and extreme-overlap
/// regimes; negative for small `n`, first positive near n = 2517.
pub fn overlap_regime_threshold(n: f64) -> f64 {
    n - 5.0 * std::f64::consts::E * (n + 3.0).powf(2.0 / 3.0)
}

pub(crate) fn factorial_big(m: u32) -> BigUint {
    let mut acc = BigUint::from(1u32);
    for i in 2..=m {
        acc *= i;
    }
    acc
}

pub(crate) fn binomial_big(n: u32, k: u32) -> BigUint {
    debug_assert!(k <= n);
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}
