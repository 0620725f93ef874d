//! Hypercube geometry: vertex masks, upward-oriented edges and permutation
//! paths from `0…0` to `1…1`.
//!
//! A monotone path of length `n` is encoded by the permutation of coordinate
//! directions it takes; after `i` steps the path sits at the bitmask of the
//! first `i` directions. Two paths traverse the same edge if and only if they
//! do so at the same step, in the same direction, coming from the same set of
//! already-visited coordinates, so shared-edge counting reduces to comparing
//! `(tail mask, direction)` pairs position by position.

use crate::error::{Error, Result};

/// Enumeration-based operations walk all `n!` paths and are limited to this.
pub const MAX_ENUM_DIMENSION: u32 = 11;

/// Number of coordinates of the hypercube. At least 2 for path operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!(
                "dimension must be at least 2, got {n}"
            )));
        }
        Ok(Dimension(n))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    /// Mask with all `n` coordinates set, i.e. the vertex `1…1`.
    #[inline]
    pub fn full_mask(self) -> VertexMask {
        VertexMask((1u64 << self.0) - 1)
    }

    /// Number of upward-oriented edges, `n * 2^(n-1)`.
    pub fn edge_count(self) -> u64 {
        u64::from(self.0) << (self.0 - 1)
    }

    fn check_enumerable(self, what: &'static str) -> Result<()> {
        if self.0 > MAX_ENUM_DIMENSION {
            return Err(Error::Resource {
                what,
                n: self.0,
                cap: MAX_ENUM_DIMENSION,
                detail: format!("would visit n! = {} paths", factorial_u64(self.0)),
            });
        }
        Ok(())
    }

    /// Guard for operations that enumerate all `n!` permutations.
    pub fn require_enumerable(self, what: &'static str) -> Result<()> {
        self.check_enumerable(what)
    }
}

fn factorial_u64(n: u32) -> u64 {
    (1..=u64::from(n)).product()
}

/// A vertex of `{0,1}^n`: bit `j` is set iff coordinate `j` equals 1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexMask(pub u64);

impl VertexMask {
    pub const ORIGIN: VertexMask = VertexMask(0);

    #[inline]
    pub fn contains(self, dir: u32) -> bool {
        self.0 >> dir & 1 == 1
    }

    #[inline]
    pub fn with(self, dir: u32) -> VertexMask {
        VertexMask(self.0 | 1u64 << dir)
    }

    /// Number of steps taken from the origin to reach this vertex.
    #[inline]
    pub fn level(self) -> u32 {
        self.0.count_ones()
    }
}

/// An upward edge: `tail` has bit `dir` clear, the head is `tail` with it set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OrientedEdge {
    pub tail: VertexMask,
    pub dir: u32,
}

impl OrientedEdge {
    pub fn new(tail: VertexMask, dir: u32) -> Result<Self> {
        if tail.contains(dir) {
            return Err(Error::Domain(format!(
                "edge direction {dir} already set in tail mask {:#b}",
                tail.0
            )));
        }
        Ok(OrientedEdge { tail, dir })
    }

    #[inline]
    pub fn head(self) -> VertexMask {
        self.tail.with(self.dir)
    }

    /// Stable index `tail * n + dir`, injective over valid edges.
    ///
    /// The id space is sparse (ids of invalid (tail, dir) pairs are skipped)
    /// which is harmless because weights are generated on demand per id.
    #[inline]
    pub fn id(self, n: Dimension) -> EdgeId {
        EdgeId(self.tail.0 * u64::from(n.get()) + u64::from(self.dir))
    }
}

/// Flat edge index used to address weights; `id < n * 2^n` for valid edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u64);

#[inline]
pub(crate) fn edge_id_raw(tail_bits: u64, n: u32, dir: u32) -> EdgeId {
    EdgeId(tail_bits * u64::from(n) + u64::from(dir))
}

/// A path from `0…0` to `1…1`, stored as the permutation of directions taken.
/// Directions are 0-based internally.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathPerm {
    perm: Vec<u8>,
}

impl PathPerm {
    /// Validates that `perm` is a bijection on `{0, …, len-1}`.
    pub fn new(perm: Vec<u8>) -> Result<Self> {
        let n = perm.len() as u32;
        if !(2..=64).contains(&n) {
            return Err(Error::InvalidPermutation {
                n,
                reason: "length must be in 2..=64",
            });
        }
        let mut seen = 0u64;
        for &d in &perm {
            if u32::from(d) >= n {
                return Err(Error::InvalidPermutation {
                    n,
                    reason: "direction out of range",
                });
            }
            if seen >> d & 1 == 1 {
                return Err(Error::InvalidPermutation {
                    n,
                    reason: "repeated direction",
                });
            }
            seen |= 1 << d;
        }
        Ok(PathPerm { perm })
    }

    pub fn identity(n: Dimension) -> Self {
        PathPerm {
            perm: (0..n.get() as u8).collect(),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.perm.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    #[inline]
    pub fn directions(&self) -> &[u8] {
        &self.perm
    }

    fn check_dimension(&self, n: Dimension) -> Result<()> {
        if self.perm.len() != n.get() as usize {
            return Err(Error::InvalidPermutation {
                n: n.get(),
                reason: "permutation length does not match dimension",
            });
        }
        Ok(())
    }
}

/// The `n` edges traversed by `perm`: edge `i` leaves the mask of the first
/// `i` directions in direction `perm[i]`. Tails ascend by level `0, 1, …, n-1`.
pub fn path_edges(perm: &PathPerm, n: Dimension) -> Result<Vec<OrientedEdge>> {
    perm.check_dimension(n)?;
    let mut edges = Vec::with_capacity(perm.len());
    let mut tail = VertexMask::ORIGIN;
    for &d in perm.directions() {
        let dir = u32::from(d);
        edges.push(OrientedEdge { tail, dir });
        tail = tail.with(dir);
    }
    Ok(edges)
}

/// Number of steps `i` in `{2, …, n-1}` (1-based) at which both paths
/// traverse the same edge; the first and last step are excluded.
pub fn shared_middle_edges(a: &PathPerm, b: &PathPerm, n: Dimension) -> Result<u32> {
    if n.get() < 3 {
        return Err(Error::Domain(format!(
            "paths of dimension {} have no middle edges",
            n.get()
        )));
    }
    let (mid, _) = shared_edge_counts(a, b, n)?;
    Ok(mid)
}

/// Number of steps at which both paths traverse the same edge, first and
/// last step included.
pub fn shared_total_edges(a: &PathPerm, b: &PathPerm, n: Dimension) -> Result<u32> {
    let (_, tot) = shared_edge_counts(a, b, n)?;
    Ok(tot)
}

/// Both shared-edge counts in one pass. Edges can only coincide at equal step
/// indices (the tail level pins the step), so it suffices to compare the
/// direction and prefix mask position by position.
pub fn shared_edge_counts(a: &PathPerm, b: &PathPerm, n: Dimension) -> Result<(u32, u32)> {
    a.check_dimension(n)?;
    b.check_dimension(n)?;
    let len = a.len();
    let mut mask_a = 0u64;
    let mut mask_b = 0u64;
    let mut middle = 0;
    let mut total = 0;
    for i in 0..len {
        let da = a.directions()[i];
        let db = b.directions()[i];
        if da == db && mask_a == mask_b {
            total += 1;
            if i > 0 && i < len - 1 {
                middle += 1;
            }
        }
        mask_a |= 1 << da;
        mask_b |= 1 << db;
    }
    Ok((middle, total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    fn perm(p: &[u8]) -> PathPerm {
        PathPerm::new(p.to_vec()).unwrap()
    }

    #[test]
    fn identity_path_edges() {
        let edges = path_edges(&perm(&[0, 1, 2]), dim(3)).unwrap();
        assert_eq!(
            edges,
            vec![
                OrientedEdge {
                    tail: VertexMask(0b000),
                    dir: 0
                },
                OrientedEdge {
                    tail: VertexMask(0b001),
                    dir: 1
                },
                OrientedEdge {
                    tail: VertexMask(0b011),
                    dir: 2
                },
            ]
        );
    }

    #[test]
    fn reversed_path_edges() {
        let edges = path_edges(&perm(&[2, 1, 0]), dim(3)).unwrap();
        assert_eq!(
            edges,
            vec![
                OrientedEdge {
                    tail: VertexMask(0b000),
                    dir: 2
                },
                OrientedEdge {
                    tail: VertexMask(0b100),
                    dir: 1
                },
                OrientedEdge {
                    tail: VertexMask(0b110),
                    dir: 0
                },
            ]
        );
    }

    #[test]
    fn invalid_permutations_rejected() {
        assert!(PathPerm::new(vec![0, 0, 1]).is_err());
        assert!(PathPerm::new(vec![0, 3, 1]).is_err());
        assert!(PathPerm::new(vec![1]).is_err());
        // valid perm, wrong dimension
        let p = perm(&[0, 1, 2]);
        assert!(path_edges(&p, dim(4)).is_err());
    }

    #[test]
    fn shared_middle_examples() {
        let id5 = PathPerm::identity(dim(5));
        assert_eq!(shared_middle_edges(&id5, &id5, dim(5)).unwrap(), 3);
        assert_eq!(
            shared_middle_edges(&perm(&[0, 1, 2]), &perm(&[2, 1, 0]), dim(3)).unwrap(),
            0
        );
        let id4 = PathPerm::identity(dim(4));
        assert_eq!(
            shared_middle_edges(&perm(&[0, 2, 1, 3]), &id4, dim(4)).unwrap(),
            0
        );
        assert!(shared_middle_edges(&perm(&[0, 1]), &perm(&[1, 0]), dim(2)).is_err());
    }

    #[test]
    fn shared_total_examples() {
        let id3 = PathPerm::identity(dim(3));
        assert_eq!(shared_total_edges(&id3, &id3, dim(3)).unwrap(), 3);
        // only the first edge coincides
        assert_eq!(
            shared_total_edges(&perm(&[0, 1, 2]), &perm(&[0, 2, 1]), dim(3)).unwrap(),
            1
        );
    }

    #[test]
    fn path_tails_are_all_prefix_masks() {
        let p = perm(&[3, 0, 2, 1]);
        let edges = path_edges(&p, dim(4)).unwrap();
        assert_eq!(edges.len(), 4);
        for (i, e) in edges.iter().enumerate() {
            assert_eq!(e.tail.level() as usize, i);
        }
        assert_eq!(edges.last().unwrap().head(), dim(4).full_mask());
    }

    proptest! {
        #[test]
        fn edge_id_is_injective(n in 2u32..=16, seeds in proptest::collection::vec((0u64..1u64 << 16, 0u32..16), 2..20)) {
            let d = dim(n);
            let mut seen = std::collections::HashMap::new();
            for (bits, dir) in seeds {
                let tail = VertexMask(bits & (d.full_mask().0));
                let dir = dir % n;
                if tail.contains(dir) { continue; }
                let e = OrientedEdge::new(tail, dir).unwrap();
                let id = e.id(d);
                prop_assert!(id.0 < u64::from(n) << n);
                if let Some(prev) = seen.insert(id, e) {
                    prop_assert_eq!(prev, e);
                }
            }
        }

        #[test]
        fn path_edges_are_pairwise_distinct(p in proptest_perm(8)) {
            let d = dim(8);
            let edges = path_edges(&p, d).unwrap();
            let mut ids: Vec<u64> = edges.iter().map(|e| e.id(d).0).collect();
            ids.sort_unstable();
            ids.dedup();
            prop_assert_eq!(ids.len(), 8);
        }

        #[test]
        fn shared_counts_are_symmetric((a, b) in (proptest_perm(7), proptest_perm(7))) {
            let d = dim(7);
            let ab = shared_edge_counts(&a, &b, d).unwrap();
            let ba = shared_edge_counts(&b, &a, d).unwrap();
            prop_assert_eq!(ab, ba);
            // total counts the two boundary positions on top of the middle
            prop_assert!(ab.1 >= ab.0 && ab.1 - ab.0 <= 2);
        }
    }

    fn proptest_perm(n: usize) -> impl Strategy<Value = PathPerm> {
        Just((0..n as u8).collect::<Vec<u8>>())
            .prop_shuffle()
            .prop_map(|v| PathPerm::new(v).unwrap())
    }
}
