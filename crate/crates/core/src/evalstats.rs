//! Evaluation-side scoring and the statistical ranking of methods.
//!
//! Every distance here is normalized on the whole labelable pool, so numbers
//! are comparable across methods and runs.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::dataset::{Dataset, Goal};
use crate::error::{Error, Result};
use crate::scoring::distance_to_heaven;
use crate::stats::OnlineStats;

/// |Cliff's delta| below this is a negligible effect.
pub const NEGLIGIBLE_DELTA: f64 = 0.147;

/// Per-objective `(lo, hi)` over every labelable row.
pub fn pool_bounds(data: &Dataset) -> Result<Vec<(f64, f64)>> {
    if data.pool().is_empty() {
        return Err(Error::EmptyInput);
    }
    let k = data.objective_cols().len();
    let mut stats = vec![OnlineStats::new(); k];
    for &r in data.pool() {
        for (s, y) in stats.iter_mut().zip(data.objectives(r).expect("pool row")) {
            s.add(y)?;
        }
    }
    Ok(stats.iter().map(|s| s.bounds().expect("non-empty")).collect())
}

/// Distance to heaven of every labelable row, in pool order.
pub fn pool_distances(data: &Dataset) -> Result<Vec<(usize, f64)>> {
    let bounds = pool_bounds(data)?;
    let goals = data.goals();
    data.pool()
        .iter()
        .map(|&r| Ok((r, distance_to_heaven(&data.objectives(r).expect("pool row"), &bounds, &goals)?)))
        .collect()
}

/// The labelable row closest to heaven (ties to the lower id) and its distance.
pub fn reference_optimal(data: &Dataset) -> Result<(usize, f64)> {
    let ds = pool_distances(data)?;
    Ok(ds
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .expect("non-empty pool"))
}

/// Mean distance to heaven over all labelable rows: the expected score of a
/// single uniformly random pick.
pub fn random_baseline_mean(data: &Dataset) -> Result<f64> {
    let ds = pool_distances(data)?;
    Ok(ds.iter().map(|d| d.1).sum::<f64>() / ds.len() as f64)
}

/// `1 - (y_run - y_opt) / (y_av - y_opt)`: 1 at the reference optimum, 0 at the
/// random mean, negative when worse than random. `None` when the metric is
/// undefined because `y_av == y_opt`.
pub fn optimality(y_run: f64, y_opt: f64, y_av: f64) -> Option<f64> {
    let span = y_av - y_opt;
    (span != 0.0 && span.is_finite()).then(|| 1.0 - (y_run - y_opt) / span)
}

/// Everything needed to score runs on one dataset.
#[derive(Debug, Clone)]
pub struct Evaluator {
    pub bounds: Vec<(f64, f64)>,
    pub goals: Vec<Goal>,
    pub opt_row: usize,
    pub y_opt: f64,
    pub y_av: f64,
}

impl Evaluator {
    pub fn new(data: &Dataset) -> Result<Self> {
        let (opt_row, y_opt) = reference_optimal(data)?;
        let y_av = random_baseline_mean(data)?;
        if optimality(y_opt, y_opt, y_av).is_none() {
            return Err(Error::DegenerateMetric(data.name().to_string()));
        }
        Ok(Evaluator {
            bounds: pool_bounds(data)?,
            goals: data.goals(),
            opt_row,
            y_opt,
            y_av,
        })
    }

    /// Whole-pool distance to heaven of a row.
    pub fn distance(&self, data: &Dataset, row: usize) -> Result<f64> {
        let ys = data.objectives(row).ok_or(Error::NotInPool(row))?;
        distance_to_heaven(&ys, &self.bounds, &self.goals)
    }

    pub fn optimality(&self, y_run: f64) -> f64 {
        optimality(y_run, self.y_opt, self.y_av).expect("checked at construction")
    }
}

/// Cliff's delta: `(#{x > y} - #{x < y}) / (|a| |b|)` over all pairs.
pub fn cliffs_delta(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted = b.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut net: i64 = 0;
    for &x in a {
        let below = sorted.partition_point(|&y| y < x);
        let above = sorted.len() - sorted.partition_point(|&y| y <= x);
        net += below as i64 - above as i64;
    }
    Ok(net as f64 / (a.len() * b.len()) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsOutcome {
    /// Largest gap between the two empirical CDFs.
    pub statistic: f64,
    /// Rejection threshold for the statistic; `None` for samples under 5.
    pub critical: Option<f64>,
    pub significant: bool,
}

/// Smallest sample size for which the KS test reports significance.
pub const KS_MIN_SAMPLE: usize = 5;

/// Asymptotic two-sample KS coefficient `c(alpha) = sqrt(-ln(alpha / 2) / 2)`
/// (1.358 at alpha = 0.05).
pub fn ks_coefficient(alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt()
}

pub fn ks_critical(n: usize, m: usize, alpha: f64) -> f64 {
    ks_coefficient(alpha) * (((n + m) as f64) / ((n * m) as f64)).sqrt()
}

pub fn ks_statistic(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (n, m) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j, mut best) = (0, 0, 0.0f64);
    while i < xs.len() && j < ys.len() {
        let t = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= t {
            i += 1;
        }
        while j < ys.len() && ys[j] <= t {
            j += 1;
        }
        best = best.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(best)
}

/// Two-sample Kolmogorov-Smirnov test at level `alpha`.
pub fn ks_significant(a: &[f64], b: &[f64], alpha: f64) -> Result<KsOutcome> {
    let statistic = ks_statistic(a, b)?;
    if a.len() < KS_MIN_SAMPLE || b.len() < KS_MIN_SAMPLE {
        return Ok(KsOutcome {
            statistic,
            critical: None,
            significant: false,
        });
    }
    let critical = ks_critical(a.len(), b.len(), alpha);
    Ok(KsOutcome {
        statistic,
        critical: Some(critical),
        significant: statistic > critical,
    })
}

/// True when two samples cannot be told apart: the KS test is not significant
/// at 95%, or the effect size is negligible.
pub fn indistinguishable(a: &[f64], b: &[f64]) -> Result<bool> {
    let ks = ks_significant(a, b, 0.05)?;
    Ok(!ks.significant || cliffs_delta(a, b)?.abs() < NEGLIGIBLE_DELTA)
}

/// One optimizer execution, scored on the whole dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub dataset: String,
    pub method: String,
    pub budget: usize,
    pub seed: u64,
    #[serde(rename = "best_D")]
    pub best_d: f64,
    pub optimality: f64,
    pub wall_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub budget: usize,
    pub method: String,
    /// Datasets where the method was as good as the best method.
    pub wins: usize,
    pub total: usize,
}

impl RankEntry {
    pub fn win_fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.wins as f64 / self.total as f64
        }
    }
}

pub fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Optimality samples grouped by budget, then dataset, then method.
pub type Cells = BTreeMap<usize, BTreeMap<String, BTreeMap<String, Vec<f64>>>>;

pub fn group_records(records: &[RunRecord]) -> Cells {
    let mut cells: Cells = BTreeMap::new();
    for r in records {
        cells
            .entry(r.budget)
            .or_default()
            .entry(r.dataset.clone())
            .or_default()
            .entry(r.method.clone())
            .or_default()
            .push(r.optimality);
    }
    cells
}

/// For each budget and dataset, finds the method with the highest median
/// optimality and credits a win to every method indistinguishable from it.
/// Datasets missing a method (or with fewer than two seeds in a cell) are
/// skipped for that budget with a warning.
pub fn rank_methods(records: &[RunRecord]) -> Result<Vec<RankEntry>> {
    let methods: BTreeSet<&str> = records.iter().map(|r| r.method.as_str()).collect();
    if methods.len() < 2 {
        return Err(Error::TooFew {
            needed: 2,
            found: methods.len(),
        });
    }
    let mut out = Vec::new();
    for (budget, datasets) in group_records(records) {
        let mut wins: BTreeMap<&str, usize> = methods.iter().map(|&m| (m, 0)).collect();
        let mut total = 0;
        for (name, cell) in &datasets {
            let complete = methods
                .iter()
                .all(|&m| cell.get(m).is_some_and(|s| s.len() >= 2));
            if !complete {
                log::warn!("budget {budget}: skipping dataset `{name}` with missing or undersized cells");
                continue;
            }
            total += 1;
            let leader = methods
                .iter()
                .map(|&m| (m, median(&cell[m])))
                .fold(None::<(&str, f64)>, |acc, (m, med)| match acc {
                    Some((_, best)) if best >= med => acc,
                    _ => Some((m, med)),
                })
                .expect("at least two methods")
                .0;
            for &m in &methods {
                if indistinguishable(&cell[m], &cell[leader])? {
                    *wins.get_mut(m).expect("known method") += 1;
                }
            }
        }
        for (m, w) in wins {
            out.push(RankEntry {
                budget,
                method: m.to_string(),
                wins: w,
                total,
            });
        }
    }
    Ok(out)
}

/// Mean optimality per (method, budget) across all records.
pub fn mean_optimality(records: &[RunRecord]) -> BTreeMap<(String, usize), f64> {
    let mut acc: BTreeMap<(String, usize), (f64, usize)> = BTreeMap::new();
    for r in records {
        let e = acc.entry((r.method.clone(), r.budget)).or_default();
        e.0 += r.optimality;
        e.1 += 1;
    }
    acc.into_iter().map(|(k, (s, n))| (k, s / n as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairwise_delta(a: &[f64], b: &[f64]) -> f64 {
        let mut net = 0i64;
        for x in a {
            for y in b {
                net += (x > y) as i64 - (x < y) as i64;
            }
        }
        net as f64 / (a.len() * b.len()) as f64
    }

    #[test]
    fn optimality_identities() {
        assert_eq!(optimality(0.2, 0.2, 0.6), Some(1.0));
        assert_eq!(optimality(0.6, 0.2, 0.6), Some(0.0));
        assert!(optimality(0.9, 0.2, 0.6).unwrap() < 0.0);
        assert_eq!(optimality(0.3, 0.4, 0.4), None);
    }

    #[test]
    fn delta_examples() {
        assert_eq!(cliffs_delta(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(), 0.0);
        assert_eq!(cliffs_delta(&[4.0, 5.0, 6.0], &[1.0, 2.0, 3.0]).unwrap(), 1.0);
        assert_eq!(pairwise_delta(&[1.0, 3.0], &[2.0]), 0.0);
        assert_eq!(cliffs_delta(&[1.0, 3.0], &[2.0]).unwrap(), 0.0);
        assert!(cliffs_delta(&[], &[1.0]).is_err());
    }

    #[test]
    fn delta_matches_pairwise_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let n = rng.random_range(1..15);
            let m = rng.random_range(1..15);
            let a: Vec<f64> = (0..n).map(|_| rng.random_range(0..6) as f64).collect();
            let b: Vec<f64> = (0..m).map(|_| rng.random_range(0..6) as f64).collect();
            assert!((cliffs_delta(&a, &b).unwrap() - pairwise_delta(&a, &b)).abs() < 1e-15);
        }
    }

    #[test]
    fn ks_examples() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let r = ks_significant(&a, &a, 0.05).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(!r.significant);
        let b = [10.0, 11.0, 12.0, 13.0, 14.0, 15.0];
        let r = ks_significant(&a, &b, 0.05).unwrap();
        assert_eq!(r.statistic, 1.0);
        assert!(r.significant);
        // 1.358 * sqrt(40 / 400)
        assert!((ks_critical(20, 20, 0.05) - 0.4294).abs() < 1e-4);
        assert!((ks_coefficient(0.05) - 1.358).abs() < 1e-3);
        // too small to call
        let r = ks_significant(&a[..4], &b[..4], 0.05).unwrap();
        assert_eq!(r.statistic, 1.0);
        assert!(!r.significant);
        assert!(ks_significant(&[], &b, 0.05).is_err());
    }

    #[test]
    fn ks_handles_ties_across_samples() {
        // ECDFs: at 1 -> 2/3 vs 1/3; at 2 -> 1 vs 2/3
        let s = ks_statistic(&[1.0, 1.0, 2.0], &[1.0, 2.0, 3.0]).unwrap();
        assert!((s - 1.0 / 3.0).abs() < 1e-12);
    }

    fn rec(dataset: &str, method: &str, budget: usize, seed: u64, opt: f64) -> RunRecord {
        RunRecord {
            dataset: dataset.into(),
            method: method.into(),
            budget,
            seed,
            best_d: 0.0,
            optimality: opt,
            wall_time: 0.0,
        }
    }

    #[test]
    fn dominant_method_wins_alone() {
        let mut rs = Vec::new();
        for d in ["d1", "d2"] {
            for s in 0..10 {
                rs.push(rec(d, "ezr", 32, s, 0.9 + s as f64 * 0.001));
                rs.push(rec(d, "random", 32, s, 0.1 + s as f64 * 0.001));
            }
        }
        let ranks = rank_methods(&rs).unwrap();
        let get = |m: &str| ranks.iter().find(|r| r.method == m).unwrap().clone();
        assert_eq!((get("ezr").wins, get("ezr").total), (2, 2));
        assert_eq!(get("random").wins, 0);
    }

    #[test]
    fn identical_samples_both_win() {
        let mut rs = Vec::new();
        for s in 0..10 {
            rs.push(rec("d", "a", 8, s, s as f64));
            rs.push(rec("d", "b", 8, s, s as f64));
        }
        let ranks = rank_methods(&rs).unwrap();
        assert!(ranks.iter().all(|r| r.wins == 1 && r.total == 1));
    }

    #[test]
    fn incomplete_cells_are_skipped() {
        let mut rs = Vec::new();
        for s in 0..6 {
            rs.push(rec("full", "a", 8, s, 0.5));
            rs.push(rec("full", "b", 8, s, 0.5));
            rs.push(rec("partial", "a", 8, s, 0.5));
        }
        let ranks = rank_methods(&rs).unwrap();
        assert!(ranks.iter().all(|r| r.total == 1));
        assert!(rank_methods(&rs[..1]).is_err());
    }

    #[test]
    fn record_field_names() {
        let j = serde_json::to_value(rec("d", "ezr", 8, 1, 0.5)).unwrap();
        let mut keys: Vec<&str> = j.as_object().unwrap().keys().map(String::as_str).collect();
        keys.sort();
        assert_eq!(
            keys,
            ["best_D", "budget", "dataset", "method", "optimality", "seed", "wall_time"]
        );
    }
}
