//! Exhaustive reference solvers for small dimensions.
//!
//! These recurse over permutations directly and share none of the DP code
//! path, so they can serve as independent oracles in tests. Partial sums are
//! accumulated left to right along the path, the same association order the
//! DP uses.

use crate::cube::{edge_id_raw, Dimension, PathPerm};
use crate::error::Result;
use crate::solver::{MiddleConstraint, MinPathResult};
use crate::weights::WeightSource;

/// Minimum over all `n!` paths by depth-first enumeration, `n <= 11`.
pub fn enumerate_min(n: Dimension, src: &impl WeightSource) -> Result<MinPathResult> {
    n.require_enumerable("exhaustive minimum")?;
    let bits = n.get();
    let mut state = Search {
        bits,
        full: n.full_mask().0,
        src,
        prefix: Vec::with_capacity(bits as usize),
        best: f64::INFINITY,
        best_perm: Vec::new(),
    };
    state.descend(0, 0.0);
    Ok(MinPathResult {
        min_weight: state.best,
        argmin: PathPerm::new(state.best_perm).expect("search yields a permutation"),
    })
}

struct Search<'a, W: WeightSource> {
    bits: u32,
    full: u64,
    src: &'a W,
    prefix: Vec<u8>,
    best: f64,
    best_perm: Vec<u8>,
}

impl<W: WeightSource> Search<'_, W> {
    fn descend(&mut self, mask: u64, partial: f64) {
        if mask == self.full {
            if partial < self.best {
                self.best = partial;
                self.best_perm = self.prefix.clone();
            }
            return;
        }
        let mut rem = self.full & !mask;
        while rem != 0 {
            let v = rem.trailing_zeros();
            rem &= rem - 1;
            let w = self.src.weight(edge_id_raw(mask, self.bits, v));
            self.prefix.push(v as u8);
            self.descend(mask | (1u64 << v), partial + w);
            self.prefix.pop();
        }
    }
}

/// Minimum middle sum over the `(n-2)!` admissible paths with pinned first
/// and last directions; boundary edges excluded. Empty middle for n = 2.
pub fn enumerate_min_middle(
    n: Dimension,
    c: MiddleConstraint,
    src: &impl WeightSource,
) -> Result<f64> {
    n.require_enumerable("exhaustive middle minimum")?;
    if n.get() == 2 {
        return Ok(0.0);
    }
    let bits = n.get();
    let target = n.full_mask().0 & !(1u64 << c.last_dir());
    let mut best = f64::INFINITY;
    descend_middle(bits, src, 1u64 << c.first_dir(), target, 0.0, &mut best);
    Ok(best)
}

fn descend_middle(
    bits: u32,
    src: &impl WeightSource,
    mask: u64,
    target: u64,
    partial: f64,
    best: &mut f64,
) {
    if mask == target {
        if partial < *best {
            *best = partial;
        }
        return;
    }
    let mut rem = target & !mask;
    while rem != 0 {
        let v = rem.trailing_zeros();
        rem &= rem - 1;
        let w = src.weight(edge_id_raw(mask, bits, v));
        descend_middle(bits, src, mask | (1u64 << v), target, partial + w, best);
    }
}
