//! One table builder per subcommand.

use hyperfpp::analytics::{
    empirical_pz_ratio, gamma_lower_cdf, good_edge_stats, independent_min_cdf,
    independent_min_median, mean_connecting, overlap_midrange_bound_log, overlap_table,
    overlap_worst_case_bound, second_moment_terms,
};
use hyperfpp::solver::{enumerate_counts, sample_min_capped};
use hyperfpp::{derive_replica, Dimension, Seed};

use crate::output::{Cell, Table};
use crate::CliError;

fn fmt_num(v: f64) -> String {
    format!("{v}")
}

/// Nearest-rank quantile of an ascending sample (no interpolation).
fn nearest_rank(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let rank = (q * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

fn summary_cells(samples: &[f64]) -> [f64; 6] {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    [
        mean,
        nearest_rank(&sorted, 0.25),
        nearest_rank(&sorted, 0.5),
        nearest_rank(&sorted, 0.75),
        sorted[0],
        *sorted.last().unwrap(),
    ]
}

pub fn sample(n: u32, seed: u64, reps: u64, threads: usize, cap: u32) -> Result<Table, CliError> {
    let dim = Dimension::new(n)?;
    let samples = sample_min_capped(dim, Seed(seed), reps, threads, cap)?;
    let mut rows: Vec<Vec<Cell>> = samples
        .iter()
        .enumerate()
        .map(|(r, &v)| {
            vec![
                Cell::Text("m_n".into()),
                Cell::UInt(r as u64),
                Cell::Float(v),
            ]
        })
        .collect();
    let [mean, q25, median, q75, min, max] = summary_cells(&samples);
    for (label, v) in [
        ("mean", mean),
        ("q25", q25),
        ("median", median),
        ("q75", q75),
        ("min", min),
        ("max", max),
    ] {
        rows.push(vec![Cell::Text(label.into()), Cell::Empty, Cell::Float(v)]);
    }
    Ok(Table {
        command: "sample",
        config: vec![
            ("n", n.to_string()),
            ("seed", seed.to_string()),
            ("reps", reps.to_string()),
            ("cap", cap.to_string()),
        ],
        columns: vec!["kind", "replica", "value"],
        rows,
    })
}

pub fn convergence(
    ns: &[u32],
    seed: u64,
    reps: u64,
    threads: usize,
    cap: u32,
) -> Result<Table, CliError> {
    let mut rows = Vec::new();
    for &n in ns {
        let dim = Dimension::new(n)?;
        let samples = sample_min_capped(dim, Seed(seed), reps, threads, cap)?;
        let [mean, q25, median, q75, min, max] = summary_cells(&samples);
        rows.push(vec![
            Cell::UInt(u64::from(n)),
            Cell::UInt(reps),
            Cell::Float(mean),
            Cell::Float(q25),
            Cell::Float(median),
            Cell::Float(q75),
            Cell::Float(min),
            Cell::Float(max),
        ]);
    }
    Ok(Table {
        command: "convergence",
        config: vec![
            (
                "ns",
                ns.iter()
                    .map(|n| n.to_string())
                    .collect::<Vec<_>>()
                    .join(":"),
            ),
            ("seed", seed.to_string()),
            ("reps", reps.to_string()),
            ("cap", cap.to_string()),
        ],
        columns: vec!["n", "reps", "mean", "q25", "median", "q75", "min", "max"],
        rows,
    })
}

pub fn independent(n_min: u32, n_max: u32, x: Option<f64>) -> Result<Table, CliError> {
    if n_min == 0 || n_min > n_max {
        return Err(hyperfpp::Error::Domain(format!(
            "need 1 <= n-min <= n-max, got {n_min}..{n_max}"
        ))
        .into());
    }
    let mut rows = Vec::new();
    for n in n_min..=n_max {
        let median = independent_min_median(n)?;
        let (x_cell, cdf_cell) = match x {
            Some(x) => (Cell::Float(x), Cell::Float(independent_min_cdf(n, x)?)),
            None => (Cell::Empty, Cell::Empty),
        };
        rows.push(vec![
            Cell::UInt(u64::from(n)),
            x_cell,
            cdf_cell,
            Cell::Float(median),
        ]);
    }
    Ok(Table {
        command: "independent",
        config: vec![
            ("n_min", n_min.to_string()),
            ("n_max", n_max.to_string()),
            ("x", x.map_or_else(|| "none".into(), fmt_num)),
        ],
        columns: vec!["n", "x", "cdf", "median"],
        rows,
    })
}

/// Boundary blocks of the first/last `ceil(c * n)` coordinate directions.
pub fn default_boundary_sets(
    n: u32,
    c: f64,
    size_a: Option<u32>,
    size_b: Option<u32>,
) -> Result<(Vec<u32>, Vec<u32>), CliError> {
    let block = (c * f64::from(n)).ceil().max(1.0) as u32;
    let sa = size_a.unwrap_or(block);
    let sb = size_b.unwrap_or(block);
    if sa == 0 || sb == 0 || sa + sb > n {
        return Err(hyperfpp::Error::Domain(format!(
            "boundary sets of sizes {sa} and {sb} do not fit disjointly in {n} directions"
        ))
        .into());
    }
    Ok(((0..sa).collect(), (n - sb..n).collect()))
}

#[allow(clippy::too_many_arguments)]
pub fn enumerate(
    n: u32,
    seed: u64,
    reps: u64,
    x: Option<f64>,
    eps: f64,
    c: f64,
    constrained: bool,
    size_a: Option<u32>,
    size_a_prime: Option<u32>,
) -> Result<Table, CliError> {
    let dim = Dimension::new(n)?;
    let threshold = x.unwrap_or(1.0 + eps / 3.0);
    let sets = if constrained {
        Some(default_boundary_sets(n, c, size_a, size_a_prime)?)
    } else {
        None
    };
    let mut rows = Vec::new();
    for r in 0..reps {
        let stream = derive_replica(Seed(seed), r);
        let count = enumerate_counts(
            dim,
            &stream,
            threshold,
            sets.as_ref().map(|(a, b)| (a.as_slice(), b.as_slice())),
        )?;
        rows.push(vec![Cell::UInt(r), Cell::UInt(count)]);
    }
    let mut config = vec![
        ("n", n.to_string()),
        ("seed", seed.to_string()),
        ("reps", reps.to_string()),
        ("x", fmt_num(threshold)),
        ("constrained", constrained.to_string()),
    ];
    if let Some((a, b)) = &sets {
        config.push(("size_a", a.len().to_string()));
        config.push(("size_a_prime", b.len().to_string()));
    }
    Ok(Table {
        command: "enumerate",
        config,
        columns: vec!["replica", "count"],
        rows,
    })
}

pub fn fnk(n: u32) -> Result<Table, CliError> {
    let table = overlap_table(n)?;
    let mut rows = Vec::new();
    for k in 0..=n {
        let f = if k <= n - 2 {
            Cell::from(table.middle_count(k).clone())
        } else {
            Cell::Empty
        };
        let bound_iii = if (1..=n - 2).contains(&k) {
            Cell::from(overlap_worst_case_bound(n, k)?)
        } else {
            Cell::Empty
        };
        let midrange = overlap_midrange_bound_log(u64::from(n), u64::from(k))?;
        rows.push(vec![
            Cell::UInt(u64::from(k)),
            f,
            Cell::from(table.total_count(k).clone()),
            bound_iii,
            Cell::Float(midrange.log_value),
            Cell::UInt(u64::from(midrange.in_regime)),
        ]);
    }
    Ok(Table {
        command: "fnk",
        config: vec![("n", n.to_string())],
        columns: vec![
            "k",
            "f",
            "f1",
            "bound_iii",
            "bound_ii_log",
            "bound_ii_in_regime",
        ],
        rows,
    })
}

pub fn tail(n_max: u32, xs: &[f64]) -> Result<Table, CliError> {
    let mut rows = Vec::new();
    for n in 1..=n_max {
        for &x in xs {
            let t = gamma_lower_cdf(n, x)?;
            rows.push(vec![
                Cell::UInt(u64::from(n)),
                Cell::Float(x),
                Cell::Float(t.cdf),
                Cell::Float(t.correction),
                Cell::Float(x.exp() * x / (f64::from(n) + 1.0)),
            ]);
        }
    }
    Ok(Table {
        command: "tail",
        config: vec![
            ("n_max", n_max.to_string()),
            (
                "xs",
                xs.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(":"),
            ),
        ],
        columns: vec!["n", "x", "cdf", "correction", "correction_bound"],
        rows,
    })
}

pub fn bounds(ns: &[f64], eps: f64, c: f64) -> Result<Table, CliError> {
    let mut rows = Vec::new();
    for &n in ns {
        let t = second_moment_terms(n, eps, c)?;
        rows.push(vec![
            Cell::Float(n),
            Cell::Float(t.regime_threshold),
            Cell::Float(t.t1_log),
            Cell::Float(t.t2_log),
            t.t3_log.map_or(Cell::Empty, Cell::Float),
        ]);
    }
    Ok(Table {
        command: "bounds",
        config: vec![
            (
                "ns",
                ns.iter().map(|n| fmt_num(*n)).collect::<Vec<_>>().join(":"),
            ),
            ("eps", fmt_num(eps)),
            ("c", fmt_num(c)),
        ],
        columns: vec!["n", "regime_threshold", "t1_log", "t2_log", "t3_log"],
        rows,
    })
}

pub fn goodedges(n: u64, t: f64, reps: u64, seed: u64) -> Result<Table, CliError> {
    let est = good_edge_stats(n, t, reps, Seed(seed))?;
    Ok(Table {
        command: "goodedges",
        config: vec![
            ("n", n.to_string()),
            ("t", fmt_num(t)),
            ("reps", reps.to_string()),
            ("seed", seed.to_string()),
        ],
        columns: vec!["n", "t", "reps", "fraction_mean", "p_analytic", "std_err"],
        rows: vec![vec![
            Cell::UInt(n),
            Cell::Float(t),
            Cell::UInt(reps),
            Cell::Float(est.fraction_mean),
            Cell::Float(est.p_analytic),
            Cell::Float(est.std_err),
        ]],
    })
}

#[allow(clippy::too_many_arguments)]
pub fn secondmoment(
    n: u32,
    eps: f64,
    seed: u64,
    reps: u64,
    c: f64,
    size_a: Option<u32>,
    size_a_prime: Option<u32>,
) -> Result<Table, CliError> {
    let dim = Dimension::new(n)?;
    let (a, b) = default_boundary_sets(n, c, size_a, size_a_prime)?;
    let est = empirical_pz_ratio(dim, eps, &a, &b, reps, Seed(seed))?;
    let closed_form_log = mean_connecting(u64::from(n), eps, a.len() as u64, b.len() as u64)?;
    Ok(Table {
        command: "secondmoment",
        config: vec![
            ("n", n.to_string()),
            ("eps", fmt_num(eps)),
            ("seed", seed.to_string()),
            ("reps", reps.to_string()),
            ("size_a", a.len().to_string()),
            ("size_a_prime", b.len().to_string()),
        ],
        columns: vec![
            "streams",
            "mean",
            "second_moment",
            "pz_lower_bound",
            "hit_rate",
            "mean_log_closed_form",
        ],
        rows: vec![vec![
            Cell::UInt(est.streams),
            Cell::Float(est.mean),
            Cell::Float(est.second_moment),
            Cell::Float(est.pz_lower_bound),
            Cell::Float(est.hit_rate),
            Cell::Float(closed_form_log),
        ]],
    })
}
