//! Closed-form and brute-force evaluation of the tail, counting and moment
//! formulas: Gamma lower tails with correction, exact path-overlap tables
//! with their three bounds, first/second-moment terms, good-edge fractions
//! and the fully independent minimum law.

pub mod gamma;
pub mod moments;
pub mod overlap;

pub use gamma::{
    gamma_lower_cdf, independent_min_cdf, independent_min_median, log_gamma_tail, markov_upper,
    GammaTail,
};
pub use moments::{
    empirical_pz_ratio, good_edge_stats, joint_tail_check, mean_connecting, second_moment_terms,
    GoodEdgeEstimate, JointTailEstimate, PzEstimate, SecondMomentTerms,
};
pub use overlap::{
    overlap_midrange_bound_log, overlap_regime_threshold, overlap_table, overlap_worst_case_bound,
    small_overlap_bracket, OverlapTable, RegimeValue,
};
