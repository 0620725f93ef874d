//! Exact minimum-weight oriented paths by dynamic programming over vertex
//! masks, plus enumeration-based counters for small dimensions.
//!
//! The recurrence is `d(∅) = 0`, `d(S) = min_{v in S} d(S \ v) + w(S \ v, v)`;
//! every predecessor of a mask is numerically smaller, so one ascending scan
//! over all masks is a valid evaluation order. Sums are accumulated in path
//! order (tail insertion), which keeps the DP bit-compatible with the
//! exhaustive oracle. Back-pointers are one byte per mask, so dimension `n`
//! needs `9 * 2^n` bytes of scratch.

pub mod oracle;

use rayon::prelude::*;

use crate::cube::{edge_id_raw, Dimension, PathPerm};
use crate::error::{Error, Result};
use crate::weights::{derive_replica, Seed, WeightSource};

/// Default cap on the DP dimension: n = 24 needs 144 MiB of scratch.
pub const DEFAULT_DP_CAP: u32 = 24;

/// Minimum path weight together with a path attaining it.
#[derive(Clone, Debug)]
pub struct MinPathResult {
    pub min_weight: f64,
    pub argmin: PathPerm,
}

/// Boundary directions pinning the first and last step of a path; the
/// constrained middle minimum runs between them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MiddleConstraint {
    first_dir: u32,
    last_dir: u32,
}

impl MiddleConstraint {
    pub fn new(first_dir: u32, last_dir: u32) -> Result<Self> {
        if first_dir == last_dir {
            return Err(Error::EqualConstraintDirs(first_dir));
        }
        Ok(MiddleConstraint {
            first_dir,
            last_dir,
        })
    }

    pub fn first_dir(self) -> u32 {
        self.first_dir
    }

    pub fn last_dir(self) -> u32 {
        self.last_dir
    }

    fn check_dims(self, n: Dimension) -> Result<()> {
        if self.first_dir >= n.get() || self.last_dir >= n.get() {
            return Err(Error::Domain(format!(
                "constraint directions ({}, {}) out of range for n={}",
                self.first_dir,
                self.last_dir,
                n.get()
            )));
        }
        Ok(())
    }
}

fn check_dp_cap(n: Dimension, cap: u32, what: &'static str) -> Result<()> {
    if n.get() > cap {
        let mib = (9u64 << n.get()) >> 20;
        return Err(Error::Resource {
            what,
            n: n.get(),
            cap,
            detail: format!("DP scratch would need about {mib} MiB"),
        });
    }
    Ok(())
}

struct DpScratch {
    dist: Vec<f64>,
    parent: Vec<u8>,
}

impl DpScratch {
    fn new(n: u32) -> Self {
        let size = 1usize << n;
        DpScratch {
            dist: vec![0.0; size],
            parent: vec![0; size],
        }
    }
}

/// Every mask is written before any successor reads it, so the scratch never
/// needs re-initialisation between replicas.
fn dp_min(n: Dimension, src: &impl WeightSource, s: &mut DpScratch) -> MinPathResult {
    let bits = n.get();
    let size = 1usize << bits;
    s.dist[0] = 0.0;
    for mask in 1..size {
        let mut best = f64::INFINITY;
        let mut best_dir = 0u8;
        let mut rem = mask as u64;
        while rem != 0 {
            let v = rem.trailing_zeros();
            rem &= rem - 1;
            let prev = mask as u64 & !(1u64 << v);
            let cand = s.dist[prev as usize] + src.weight(edge_id_raw(prev, bits, v));
            if cand < best {
                best = cand;
                best_dir = v as u8;
            }
        }
        s.dist[mask] = best;
        s.parent[mask] = best_dir;
    }

    let mut perm = vec![0u8; bits as usize];
    let mut mask = size - 1;
    for slot in perm.iter_mut().rev() {
        let d = s.parent[mask];
        *slot = d;
        mask &= !(1usize << d);
    }
    MinPathResult {
        min_weight: s.dist[size - 1],
        argmin: PathPerm::new(perm).expect("back-pointers form a permutation"),
    }
}

/// Exact `min over all n! paths of the total weight`, with its argmin.
pub fn min_path(n: Dimension, src: &impl WeightSource) -> Result<MinPathResult> {
    min_path_capped(n, src, DEFAULT_DP_CAP)
}

pub fn min_path_capped(n: Dimension, src: &impl WeightSource, cap: u32) -> Result<MinPathResult> {
    check_dp_cap(n, cap, "minimum-path DP")?;
    let mut scratch = DpScratch::new(n.get());
    Ok(dp_min(n, src, &mut scratch))
}

/// Minimum of the middle sum (steps 2..=n-1) over paths that start in
/// direction `first_dir` and end in direction `last_dir`; the boundary edge
/// weights are excluded from the objective. For n = 2 the middle region is
/// empty and the minimum is 0 by the empty-sum convention.
pub fn min_middle(n: Dimension, c: MiddleConstraint, src: &impl WeightSource) -> Result<f64> {
    min_middle_capped(n, c, src, DEFAULT_DP_CAP)
}

pub fn min_middle_capped(
    n: Dimension,
    c: MiddleConstraint,
    src: &impl WeightSource,
    cap: u32,
) -> Result<f64> {
    c.check_dims(n)?;
    if n.get() == 2 {
        return Ok(0.0);
    }
    check_dp_cap(n, cap, "constrained middle DP")?;

    let bits = n.get();
    let a_bit = 1u64 << c.first_dir;
    let b_bit = 1u64 << c.last_dir;
    let target = (n.full_mask().0 & !b_bit) as usize;
    // DP restricted to masks containing the first direction and excluding
    // the last; their predecessors stay inside the restriction.
    let mut dist = vec![0.0f64; target + 1];
    dist[a_bit as usize] = 0.0;
    for mask in (a_bit as usize + 1)..=target {
        let m = mask as u64;
        if m & a_bit == 0 || m & b_bit != 0 {
            continue;
        }
        let mut best = f64::INFINITY;
        let mut rem = m & !a_bit;
        while rem != 0 {
            let v = rem.trailing_zeros();
            rem &= rem - 1;
            let prev = m & !(1u64 << v);
            let cand = dist[prev as usize] + src.weight(edge_id_raw(prev, bits, v));
            if cand < best {
                best = cand;
            }
        }
        dist[mask] = best;
    }
    Ok(dist[target])
}

/// Path counts by enumeration, `n <= 11`.
///
/// Unconstrained: the number of paths with total weight at most `x`. With a
/// constraint `(A, A')`: the number of paths whose first direction lies in
/// `A`, last direction in `A'`, and whose middle sum is at most `x`.
/// Positive weights make prefix sums monotone, so subtrees are pruned exactly.
pub fn enumerate_counts(
    n: Dimension,
    src: &impl WeightSource,
    x: f64,
    constraint: Option<(&[u32], &[u32])>,
) -> Result<u64> {
    n.require_enumerable("path-count enumeration")?;
    let bits = n.get();
    let full = n.full_mask().0;
    match constraint {
        None => Ok(dfs_total(bits, src, full, 0, 0.0, x)),
        Some((first_set, last_set)) => {
            for &d in first_set.iter().chain(last_set.iter()) {
                if d >= bits {
                    return Err(Error::Domain(format!(
                        "constraint direction {d} out of range for n={bits}"
                    )));
                }
            }
            let mut count = 0;
            for &a in first_set {
                for &b in last_set {
                    if a == b {
                        continue;
                    }
                    let target = full & !(1u64 << b);
                    count += dfs_middle(bits, src, 1u64 << a, target, 0.0, x);
                }
            }
            Ok(count)
        }
    }
}

fn dfs_total(
    bits: u32,
    src: &impl WeightSource,
    full: u64,
    mask: u64,
    partial: f64,
    x: f64,
) -> u64 {
    if partial > x {
        return 0;
    }
    if mask == full {
        return 1;
    }
    let mut count = 0;
    let mut rem = full & !mask;
    while rem != 0 {
        let v = rem.trailing_zeros();
        rem &= rem - 1;
        let w = src.weight(edge_id_raw(mask, bits, v));
        count += dfs_total(bits, src, full, mask | (1u64 << v), partial + w, x);
    }
    count
}

fn dfs_middle(
    bits: u32,
    src: &impl WeightSource,
    mask: u64,
    target: u64,
    partial: f64,
    x: f64,
) -> u64 {
    if partial > x {
        return 0;
    }
    if mask == target {
        return 1;
    }
    let mut count = 0;
    let mut rem = target & !mask;
    while rem != 0 {
        let v = rem.trailing_zeros();
        rem &= rem - 1;
        let w = src.weight(edge_id_raw(mask, bits, v));
        count += dfs_middle(bits, src, mask | (1u64 << v), target, partial + w, x);
    }
    count
}

fn build_pool(threads: usize) -> Result<rayon::ThreadPool> {
    if threads == 0 {
        return Err(Error::Domain("parallelism must be at least 1".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Domain(format!("thread pool: {e}")))
}

/// One exact minimum per replica, in replica order. Replica `r` draws from
/// `derive_replica(seed, r)`, so the output is bytewise independent of the
/// parallelism degree.
pub fn sample_min(n: Dimension, seed: Seed, reps: u64, threads: usize) -> Result<Vec<f64>> {
    sample_min_capped(n, seed, reps, threads, DEFAULT_DP_CAP)
}

pub fn sample_min_capped(
    n: Dimension,
    seed: Seed,
    reps: u64,
    threads: usize,
    cap: u32,
) -> Result<Vec<f64>> {
    check_dp_cap(n, cap, "minimum-path DP")?;
    if reps == 0 {
        return Err(Error::Domain("reps must be at least 1".into()));
    }
    let pool = build_pool(threads)?;
    Ok(pool.install(|| {
        (0..reps)
            .into_par_iter()
            .map_init(
                || DpScratch::new(n.get()),
                |scratch, r| dp_min(n, &derive_replica(seed, r), scratch).min_weight,
            )
            .collect()
    }))
}

/// Monte Carlo estimate of `P(min path weight <= x)`.
#[derive(Clone, Copy, Debug)]
pub struct TailProbability {
    pub hits: u64,
    pub reps: u64,
}

impl TailProbability {
    pub fn estimate(&self) -> f64 {
        self.hits as f64 / self.reps as f64
    }

    /// Binomial standard error of the estimate.
    pub fn std_err(&self) -> f64 {
        let p = self.estimate();
        (p * (1.0 - p) / self.reps as f64).sqrt()
    }
}

/// Indicator Monte Carlo for `P(min path weight <= x)` over `reps` replicas.
///
/// Uses a threshold-pruned layered search instead of the full DP: along any
/// optimal path prefix sums only grow, so states above `x` can never lead to
/// a path at or below `x`, and the surviving indicator matches the full DP
/// exactly. At the thresholds of interest only a tiny fraction of masks stays
/// alive, which is what makes 10^5 replicas at n = 18 feasible.
pub fn prob_below(
    n: Dimension,
    x: f64,
    seed: Seed,
    reps: u64,
    threads: usize,
) -> Result<TailProbability> {
    prob_below_capped(n, x, seed, reps, threads, DEFAULT_DP_CAP)
}

pub fn prob_below_capped(
    n: Dimension,
    x: f64,
    seed: Seed,
    reps: u64,
    threads: usize,
    cap: u32,
) -> Result<TailProbability> {
    check_dp_cap(n, cap.min(31), "threshold-pruned DP")?;
    if reps == 0 {
        return Err(Error::Domain("reps must be at least 1".into()));
    }
    if x <= 0.0 || x.is_nan() {
        return Err(Error::Domain(format!(
            "threshold must be positive, got {x}"
        )));
    }
    let pool = build_pool(threads)?;
    let hits = pool.install(|| {
        (0..reps)
            .into_par_iter()
            .map_init(
                || TailScratch::new(n.get()),
                |scratch, r| u64::from(tail_hit(n, &derive_replica(seed, r), x, scratch)),
            )
            .sum()
    });
    Ok(TailProbability { hits, reps })
}

struct TailScratch {
    best: Vec<f64>,
    frontier: Vec<u32>,
    next: Vec<u32>,
}

impl TailScratch {
    fn new(n: u32) -> Self {
        TailScratch {
            best: vec![f64::INFINITY; 1usize << n],
            frontier: Vec::new(),
            next: Vec::new(),
        }
    }
}

/// Expands only masks reachable with cost <= x, layer by layer; entries are
/// reset to infinity as they are consumed so the scratch stays clean.
fn tail_hit(n: Dimension, src: &impl WeightSource, x: f64, s: &mut TailScratch) -> bool {
    let bits = n.get();
    let full = n.full_mask().0;
    s.frontier.clear();
    s.frontier.push(0);
    s.best[0] = 0.0;
    for _layer in 0..bits {
        s.next.clear();
        for i in 0..s.frontier.len() {
            let mask = s.frontier[i] as u64;
            let d = s.best[mask as usize];
            s.best[mask as usize] = f64::INFINITY;
            let mut rem = full & !mask;
            while rem != 0 {
                let v = rem.trailing_zeros();
                rem &= rem - 1;
                let nd = d + src.weight(edge_id_raw(mask, bits, v));
                if nd <= x {
                    let succ = (mask | (1u64 << v)) as usize;
                    if nd < s.best[succ] {
                        if s.best[succ].is_infinite() {
                            s.next.push(succ as u32);
                        }
                        s.best[succ] = nd;
                    }
                }
            }
        }
        std::mem::swap(&mut s.frontier, &mut s.next);
        if s.frontier.is_empty() {
            return false;
        }
    }
    // only the full mask can survive the last layer
    debug_assert!(s.frontier.iter().all(|&m| u64::from(m) == full));
    for &m in &s.frontier {
        s.best[m as usize] = f64::INFINITY;
    }
    true
}
