//! First- and second-moment machinery for paths constrained to cheap
//! boundary edges, plus the Monte Carlo checks coupled to it.

use rayon::prelude::*;

use crate::analytics::gamma::{gamma_lower_cdf, log_gamma_tail};
use crate::analytics::overlap::overlap_regime_threshold;
use crate::cube::Dimension;
use crate::error::{Error, Result};
use crate::numeric::ln_factorial;
use crate::solver::enumerate_counts;
use crate::weights::{derive_replica, Seed, WeightStream};

/// Enumeration-backed moment estimates walk all admissible paths per stream.
pub const MAX_PZ_DIMENSION: u32 = 9;

/// `ln E[count of paths with boundary dirs in (A, A') and middle sum <= 1 + eps/3]`
/// `= ln |A| + ln |A'| + ln (n-2)! + ln P(Gamma(n-2) <= 1 + eps/3)`.
/// Log-space throughout, finite for `n` up to 10^16.
pub fn mean_connecting(n: u64, eps: f64, size_a: u64, size_a_prime: u64) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "mean_connecting needs n >= 3, got {n}"
        )));
    }
    if eps <= 0.0 || eps.is_nan() {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    if size_a == 0 || size_a_prime == 0 || size_a.saturating_add(size_a_prime) > n {
        return Err(Error::Domain(format!(
            "boundary set sizes ({size_a}, {size_a_prime}) must be positive and sum to at most n={n}"
        )));
    }
    Ok((size_a as f64).ln()
        + (size_a_prime as f64).ln()
        + ln_factorial(n - 2)
        + log_gamma_tail(n - 2, 1.0 + eps / 3.0)?)
}

/// Log values of the three vanishing terms that bound the normalised second
/// moment, one per overlap regime. The unspecified absolute constant and the
/// `1 + o(1)` factors are taken as 1, so these are useful for signs,
/// monotonicity and limits rather than exact constants.
#[derive(Clone, Copy, Debug)]
pub struct SecondMomentTerms {
    pub n: f64,
    pub eps: f64,
    pub c: f64,
    /// `n - 5e(n+3)^(2/3)`, the moderate/extreme overlap crossover.
    pub regime_threshold: f64,
    /// Small overlap, `k <= n^(1/4)`: `ln(12/(c^2 eps)) - (3/4) ln n`.
    pub t1_log: f64,
    /// Moderate overlap: `ln(12/(eps c^2)) + 6 ln n - n^(1/4) ln(1 + eps/3)`.
    pub t2_log: f64,
    /// Extreme overlap: `n ln n - t ln(t (1 + eps/3))` with `t` the regime
    /// threshold; undefined when the threshold is not above 2.
    pub t3_log: Option<f64>,
}

pub fn second_moment_terms(n: f64, eps: f64, c: f64) -> Result<SecondMomentTerms> {
    if eps <= 0.0 || eps.is_nan() {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    if c <= 0.0 || c >= 1.0 || c.is_nan() {
        return Err(Error::Domain(format!("c must lie in (0, 1), got {c}")));
    }
    if n < 2.0 || n.is_nan() {
        return Err(Error::Domain(format!("n must be at least 2, got {n}")));
    }
    let log_front = (12.0 / (c * c * eps)).ln();
    let threshold = overlap_regime_threshold(n);
    let t1_log = log_front - 0.75 * n.ln();
    let t2_log = log_front + 6.0 * n.ln() - n.powf(0.25) * (1.0 + eps / 3.0).ln();
    let t3_log = if threshold > 2.0 {
        Some(n * n.ln() - threshold * (threshold * (1.0 + eps / 3.0)).ln())
    } else {
        None
    };
    Ok(SecondMomentTerms {
        n,
        eps,
        c,
        regime_threshold: threshold,
        t1_log,
        t2_log,
        t3_log,
    })
}

/// Coupled Monte Carlo estimate of `P(X <= x, X' <= x)` for two Gamma(n,1)
/// sums sharing exactly `k` of their exponentials, against the product bound
/// `P(Gamma(n) <= x) P(Gamma(n-k) <= x)`.
#[derive(Clone, Copy, Debug)]
pub struct JointTailEstimate {
    pub hits: u64,
    pub trials: u64,
    pub estimate: f64,
    pub bound: f64,
}

impl JointTailEstimate {
    pub fn std_err(&self) -> f64 {
        (self.estimate * (1.0 - self.estimate) / self.trials as f64).sqrt()
    }
}

pub fn joint_tail_check(
    n: u32,
    k: u32,
    x: f64,
    trials: u64,
    stream: &WeightStream,
) -> Result<JointTailEstimate> {
    if k > n {
        return Err(Error::Domain(format!("need k <= n, got n={n} k={k}")));
    }
    if n == 0 || trials == 0 {
        return Err(Error::Domain("need n >= 1 and trials >= 1".into()));
    }
    let bound = gamma_lower_cdf(n, x)?.cdf * gamma_lower_cdf(n - k, x)?.cdf;
    let span = u64::from(2 * n);
    let hits: u64 = (0..trials)
        .into_par_iter()
        .map(|t| {
            let base = t * span;
            let mut first = 0.0;
            let mut shared = 0.0;
            for i in 0..u64::from(n) {
                let w = stream.exp_at(base + i);
                first += w;
                if i < u64::from(k) {
                    shared += w;
                }
            }
            let mut second = shared;
            for i in u64::from(k)..u64::from(n) {
                second += stream.exp_at(base + u64::from(n) + i);
            }
            u64::from(first <= x && second <= x)
        })
        .sum();
    Ok(JointTailEstimate {
        hits,
        trials,
        estimate: hits as f64 / trials as f64,
        bound,
    })
}

/// Empirical moment summary of the constrained path count over many replicas,
/// with the second-moment lower bound `(E N)^2 / E[N^2]` on `P(N > 0)`.
#[derive(Clone, Copy, Debug)]
pub struct PzEstimate {
    pub streams: u64,
    pub mean: f64,
    pub second_moment: f64,
    pub pz_lower_bound: f64,
    pub hit_rate: f64,
    /// Standard error of `mean`.
    pub mean_std_err: f64,
}

/// Per replica, count paths with first direction in `a`, last in `a_prime`
/// and middle sum at most `1 + eps/3`, then summarise the count distribution.
pub fn empirical_pz_ratio(
    n: Dimension,
    eps: f64,
    a: &[u32],
    a_prime: &[u32],
    streams: u64,
    seed: Seed,
) -> Result<PzEstimate> {
    if n.get() > MAX_PZ_DIMENSION {
        return Err(Error::Resource {
            what: "moment-estimate enumeration",
            n: n.get(),
            cap: MAX_PZ_DIMENSION,
            detail: "counts all admissible paths per stream".into(),
        });
    }
    if streams == 0 {
        return Err(Error::Domain("streams must be at least 1".into()));
    }
    let threshold = 1.0 + eps / 3.0;
    let counts: Vec<u64> = (0..streams)
        .into_par_iter()
        .map(|r| {
            enumerate_counts(n, &derive_replica(seed, r), threshold, Some((a, a_prime)))
                .expect("dimension checked above")
        })
        .collect();
    let m = streams as f64;
    let mean = counts.iter().map(|&c| c as f64).sum::<f64>() / m;
    let second_moment = counts.iter().map(|&c| (c as f64) * (c as f64)).sum::<f64>() / m;
    let hit_rate = counts.iter().filter(|&&c| c > 0).count() as f64 / m;
    let pz_lower_bound = if second_moment > 0.0 {
        mean * mean / second_moment
    } else {
        0.0
    };
    let variance = (second_moment - mean * mean).max(0.0);
    Ok(PzEstimate {
        streams,
        mean,
        second_moment,
        pz_lower_bound,
        hit_rate,
        mean_std_err: (variance / m).sqrt(),
    })
}

/// Simulated fraction of directions whose outgoing edge at the origin is
/// cheap (weight <= t) while the matching incoming edge at the top is not,
/// against the closed form `p(t) = (1 - e^-t) e^-t`. The two boundary edge
/// sets are disjoint, hence independent.
#[derive(Clone, Copy, Debug)]
pub struct GoodEdgeEstimate {
    pub n: u64,
    pub reps: u64,
    pub fraction_mean: f64,
    pub p_analytic: f64,
    /// Standard error of `fraction_mean`.
    pub std_err: f64,
}

pub fn good_edge_stats(n: u64, t: f64, reps: u64, seed: Seed) -> Result<GoodEdgeEstimate> {
    if t <= 0.0 || t.is_nan() {
        return Err(Error::Domain(format!(
            "threshold must be positive, got {t}"
        )));
    }
    if n == 0 || reps == 0 {
        return Err(Error::Domain("need n >= 1 and reps >= 1".into()));
    }
    let counts: Vec<u64> = (0..reps)
        .into_par_iter()
        .map(|r| {
            let stream = derive_replica(seed, r);
            (0..n)
                .filter(|&i| stream.exp_at(2 * i) <= t && stream.exp_at(2 * i + 1) > t)
                .count() as u64
        })
        .collect();
    let fractions: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
    let m = reps as f64;
    let mean = fractions.iter().sum::<f64>() / m;
    let var = fractions
        .iter()
        .map(|f| (f - mean) * (f - mean))
        .sum::<f64>()
        / m;
    Ok(GoodEdgeEstimate {
        n,
        reps,
        fraction_mean: mean,
        p_analytic: -(-t).exp_m1() * (-t).exp(),
        std_err: (var / m).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::WeightStream;

    #[test]
    fn mean_connecting_formula_instantiation() {
        // n=8, |A| = |A'| = 1, eps = 0.3: exp equals 6! P(Gamma(6) <= 1.1)
        let got = mean_connecting(8, 0.3, 1, 1).unwrap().exp();
        assert!((got - 0.696858038052683).abs() < 1e-12, "{got}");
        // grows without bound with proportional boundary sets
        let mut prev = f64::NEG_INFINITY;
        for n in (100u64..=200).step_by(10) {
            let size = (0.08 * n as f64).ceil() as u64;
            let v = mean_connecting(n, 0.3, size, size).unwrap();
            assert!(v > prev, "n={n}: {v} <= {prev}");
            prev = v;
        }
        // log-space totality at extreme dimensions
        assert!(mean_connecting(10u64.pow(16), 0.3, 100, 100)
            .unwrap()
            .is_finite());
        assert!(mean_connecting(2, 0.3, 1, 1).is_err());
        assert!(mean_connecting(8, 0.3, 5, 5).is_err());
    }

    #[test]
    fn second_moment_term_values() {
        // exact arithmetic identity for the small-overlap term
        let t = second_moment_terms(1e4, 0.3, 0.08).unwrap();
        let want = (12.0f64 / (0.0064 * 0.3)).ln() - 0.75 * (1e4f64).ln();
        assert_eq!(t.t1_log.to_bits(), want.to_bits());
        assert!(t.t3_log.is_some());
        // strictly decreasing t1 in n
        let t2 = second_moment_terms(2e4, 0.3, 0.08).unwrap();
        assert!(t2.t1_log < t.t1_log);
        // crossovers frozen from direct evaluation
        assert!(second_moment_terms(1e16, 0.3, 0.08).unwrap().t2_log < 0.0);
        assert!(
            second_moment_terms(1e14, 0.3, 0.08)
                .unwrap()
                .t3_log
                .unwrap()
                < 0.0
        );
        // below the threshold the extreme term is undefined
        assert!(second_moment_terms(100.0, 0.3, 0.08)
            .unwrap()
            .t3_log
            .is_none());
        assert!(second_moment_terms(1e4, 0.0, 0.08).is_err());
        assert!(second_moment_terms(1e4, 0.3, 1.5).is_err());
    }

    #[test]
    fn joint_tail_degenerate_cases() {
        let stream = WeightStream::new(Seed(8), 0);
        // k = 0: independent sums, estimate close to cdf^2
        let r = joint_tail_check(4, 0, 1.5, 200_000, &stream).unwrap();
        let cdf = gamma_lower_cdf(4, 1.5).unwrap().cdf;
        assert!((r.estimate - cdf * cdf).abs() <= 3.0 * r.std_err() + 1e-9);
        assert!((r.bound - cdf * cdf).abs() < 1e-15);
        // k = n: identical sums, bound collapses to the single cdf
        let r = joint_tail_check(4, 4, 1.5, 200_000, &stream).unwrap();
        assert!((r.bound - cdf).abs() < 1e-15);
        assert!((r.estimate - cdf).abs() <= 3.0 * r.std_err() + 1e-9);
        assert!(joint_tail_check(4, 5, 1.5, 10, &stream).is_err());
    }

    #[test]
    fn pz_degenerate_threshold_counts_everything() {
        // infinite threshold: every admissible path counts, deterministically
        let n = Dimension::new(6).unwrap();
        let r = empirical_pz_ratio(n, f64::INFINITY, &[0], &[5], 50, Seed(4)).unwrap();
        assert_eq!(r.mean, 24.0); // (n-2)!
        assert_eq!(r.pz_lower_bound, 1.0);
        assert_eq!(r.hit_rate, 1.0);
        assert_eq!(r.mean_std_err, 0.0);
    }

    #[test]
    fn pz_bound_is_consistent() {
        let n = Dimension::new(6).unwrap();
        let r = empirical_pz_ratio(n, 0.5, &[0, 1], &[4, 5], 2_000, Seed(42)).unwrap();
        // second moment dominates squared mean (Jensen), up to estimator noise
        assert!(r.second_moment + 1e-12 >= r.mean * r.mean);
        assert!(r.pz_lower_bound <= 1.0);
        assert!(r.hit_rate <= 1.0);
        assert!(
            empirical_pz_ratio(Dimension::new(10).unwrap(), 0.3, &[0], &[9], 10, Seed(1)).is_err()
        );
    }

    #[test]
    fn good_edge_closed_forms() {
        let half = good_edge_stats(10, 2f64.ln(), 1, Seed(1)).unwrap();
        assert!((half.p_analytic - 0.25).abs() < 1e-15);
        let tiny = good_edge_stats(10, 1e-9, 1, Seed(1)).unwrap();
        assert!(tiny.p_analytic < 1e-8);
        assert!(good_edge_stats(10, 0.0, 1, Seed(1)).is_err());
    }

    #[test]
    fn good_edge_simulation_matches_analytic() {
        let r = good_edge_stats(20_000, 0.1, 50, Seed(77)).unwrap();
        let sigma_pred = (r.p_analytic * (1.0 - r.p_analytic) / 20_000.0 / 50.0).sqrt();
        assert!(
            (r.fraction_mean - r.p_analytic).abs() <= 3.0 * sigma_pred,
            "{} vs {} (3 sigma = {})",
            r.fraction_mean,
            r.p_analytic,
            3.0 * sigma_pred
        );
    }
}
