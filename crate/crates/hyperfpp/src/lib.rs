//! Oriented first-passage percolation on the `n`-dimensional hypercube.
//!
//! Every monotone path from `0…0` to `1…1` is a permutation of coordinate
//! directions carrying the sum of i.i.d. Exp(1) edge weights; the minimum over
//! all `n!` paths concentrates near 1 as the dimension grows. This crate
//! provides the pieces needed to compute and probe that object exactly:
//!
//! - [`cube`]: masks, oriented edges, permutation paths, shared-edge counts;
//! - [`weights`]: deterministic counter-based Exp(1) weights, random-access
//!   by `(seed, replica, edge id)` for reproducible parallel Monte Carlo;
//! - [`solver`]: exact minima by subset DP, constrained middle minima,
//!   exhaustive small-`n` oracles and threshold-pruned tail sampling;
//! - [`analytics`]: Gamma lower tails with correction, exact overlap tables
//!   with closed-form bounds, moment formulas and good-edge statistics.

pub mod analytics;
pub mod cube;
pub mod error;
pub mod numeric;
pub mod solver;
pub mod weights;

pub use cube::{Dimension, EdgeId, OrientedEdge, PathPerm, VertexMask};
pub use error::{Error, Result};
pub use weights::{derive_replica, Seed, WeightSource, WeightStream};
