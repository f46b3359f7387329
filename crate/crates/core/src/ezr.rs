//! Contrast-set herding.
//!
//! Starting from a few random labels, each round sorts the labeled rows by
//! distance to heaven, splits them into BEST and REST, bins every decision
//! column, and scores each bin by how much more often it shows up in BEST than
//! in REST. The next row to label is drawn from the unlabeled rows that fall
//! inside the top-scoring bin. The loop stops when the label budget is spent
//! (or, optionally, once a labeled row is close enough to heaven).

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rand::seq::{index, IndexedRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{Cell, ColumnSpec, Dataset, Kind};
use crate::error::{Error, Result};
use crate::labeler::Labeler;
use crate::scoring::distance_to_heaven;

/// The generator behind every seeded run.
pub type RunRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> RunRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EzrConfig {
    /// Random labels taken before herding starts.
    pub n_init: usize,
    /// Total label budget.
    pub budget: usize,
    /// Upper bound on bins per numeric column.
    pub max_bins: usize,
    /// Keeps the contrast score finite when a bin never occurs in REST.
    pub epsilon: f64,
    /// Stop early once some labeled row is strictly closer to heaven than this.
    pub stop_threshold: Option<f64>,
    pub seed: u64,
}

impl Default for EzrConfig {
    fn default() -> Self {
        EzrConfig {
            n_init: 4,
            budget: 32,
            max_bins: 7,
            epsilon: 1e-32,
            stop_threshold: None,
            seed: 0,
        }
    }
}

impl EzrConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_init < 2 || self.n_init > self.budget {
            return Err(Error::Config(format!(
                "need 2 <= n_init ({}) <= budget ({})",
                self.n_init, self.budget
            )));
        }
        if self.max_bins < 2 {
            return Err(Error::Config(format!("max_bins must be >= 2, got {}", self.max_bins)));
        }
        if self.epsilon.is_nan() || self.epsilon <= 0.0 {
            return Err(Error::Config(format!("epsilon must be > 0, got {}", self.epsilon)));
        }
        Ok(())
    }
}

/// Result of one optimizer execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunOutcome {
    pub best_row: usize,
    /// Distance to heaven of `best_row`, normalized on the labeled rows.
    pub best_d: f64,
    pub labels_used: usize,
    /// Labeled rows in labeling order with their final distance to heaven.
    pub trace: Vec<(usize, f64)>,
}

impl RunOutcome {
    /// Rescores every labeled row with the labeler's final bounds and picks
    /// the closest to heaven (ties to the lower row id).
    pub fn from_labeler(labeler: &mut Labeler<'_>) -> Result<Self> {
        let bounds = labeler.objective_bounds().ok_or(Error::EmptyInput)?;
        let goals = labeler.goals().to_vec();
        let order = labeler.labeled().to_vec();
        let mut trace = Vec::with_capacity(order.len());
        for row in order {
            let ys = labeler.objectives(row).expect("labeled row");
            trace.push((row, distance_to_heaven(&ys, &bounds, &goals)?));
        }
        let &(best_row, best_d) = trace
            .iter()
            .min_by(|a, b| by_distance(a, b))
            .expect("non-empty trace");
        Ok(RunOutcome {
            best_row,
            best_d,
            labels_used: trace.len(),
            trace,
        })
    }
}

fn by_distance(a: &(usize, f64), b: &(usize, f64)) -> Ordering {
    a.1.total_cmp(&b.1).then(a.0.cmp(&b.0))
}

/// Draws `n` distinct ids uniformly from `pool`.
pub fn init_sample(pool: &[usize], n: usize, rng: &mut RunRng) -> Result<Vec<usize>> {
    if pool.len() < n {
        return Err(Error::PoolTooSmall {
            available: pool.len(),
            requested: n,
        });
    }
    Ok(index::sample(rng, pool.len(), n).into_iter().map(|i| pool[i]).collect())
}

/// Size of BEST for `n` labeled rows: `max(2, floor(sqrt(n)))`, capped at
/// `n - 1` so REST is never empty.
pub fn best_size(n: usize) -> usize {
    n.isqrt().max(2).min(n.saturating_sub(1))
}

/// Row ids paired with their distance to heaven.
pub type Scored = Vec<(usize, f64)>;

/// Sorts by distance (ties by row id) and splits off the best `best_size(n)`.
pub fn split_best_rest(labeled: &[(usize, f64)]) -> Result<(Scored, Scored)> {
    if labeled.len() < 2 {
        return Err(Error::TooFew {
            needed: 2,
            found: labeled.len(),
        });
    }
    let mut sorted = labeled.to_vec();
    sorted.sort_by(by_distance);
    let rest = sorted.split_off(best_size(sorted.len()));
    Ok((sorted, rest))
}

/// The region of one column a bin covers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Span {
    /// Half-open `[lo, hi)`; the outermost bins extend to infinity.
    Range { lo: f64, hi: f64 },
    Symbol(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bin {
    pub col: usize,
    pub span: Span,
    pub best: usize,
    pub rest: usize,
}

impl Bin {
    pub fn contains(&self, cell: &Cell) -> bool {
        match (&self.span, cell) {
            (Span::Range { lo, hi }, Cell::Num(x)) => *lo <= *x && *x < *hi,
            (Span::Symbol(s), Cell::Sym(v)) => s == v,
            _ => false,
        }
    }
}

/// Bins one numeric column by equal frequency. `best` and `rest` hold the
/// column's non-missing labeled values.
pub fn numeric_bins(col: usize, best: &[f64], rest: &[f64], max_bins: usize) -> Vec<Bin> {
    let mut all: Vec<f64> = best.iter().chain(rest).copied().collect();
    if all.is_empty() {
        return Vec::new();
    }
    all.sort_by(f64::total_cmp);
    let n = all.len();
    let mut distinct = 1;
    for w in all.windows(2) {
        if w[0] < w[1] {
            distinct += 1;
        }
    }
    let k = max_bins.min(distinct).max(1);
    let mut cuts: Vec<f64> = Vec::with_capacity(k - 1);
    for j in 1..k {
        let c = j * n / k;
        if all[c - 1] < all[c] {
            let mid = all[c - 1] + (all[c] - all[c - 1]) / 2.0;
            if cuts.last().is_none_or(|&last| mid > last) {
                cuts.push(mid);
            }
        }
    }
    let mut bins: Vec<Bin> = (0..=cuts.len())
        .map(|i| Bin {
            col,
            span: Span::Range {
                lo: if i == 0 { f64::NEG_INFINITY } else { cuts[i - 1] },
                hi: if i == cuts.len() { f64::INFINITY } else { cuts[i] },
            },
            best: 0,
            rest: 0,
        })
        .collect();
    for &x in best {
        bins[cuts.partition_point(|&c| c <= x)].best += 1;
    }
    for &x in rest {
        bins[cuts.partition_point(|&c| c <= x)].rest += 1;
    }
    bins
}

/// One bin per distinct symbol, in lexical order.
pub fn symbolic_bins(col: usize, best: &[&str], rest: &[&str]) -> Vec<Bin> {
    let mut counts: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for s in best {
        counts.entry(s).or_default().0 += 1;
    }
    for s in rest {
        counts.entry(s).or_default().1 += 1;
    }
    counts
        .into_iter()
        .map(|(s, (b, r))| Bin {
            col,
            span: Span::Symbol(s.to_string()),
            best: b,
            rest: r,
        })
        .collect()
}

/// Bins every decision column over the BEST and REST rows. `cell(row, col)`
/// supplies decision cells; missing cells fall in no bin.
pub fn discretize<'c>(
    columns: &[ColumnSpec],
    decision_cols: &[usize],
    best: &[usize],
    rest: &[usize],
    max_bins: usize,
    cell: impl Fn(usize, usize) -> &'c Cell,
) -> Vec<Bin> {
    let mut bins = Vec::new();
    for &col in decision_cols {
        match columns[col].kind {
            Kind::Numeric => {
                let nums = |rows: &[usize]| -> Vec<f64> {
                    rows.iter().filter_map(|&r| cell(r, col).as_num()).collect()
                };
                bins.extend(numeric_bins(col, &nums(best), &nums(rest), max_bins));
            }
            Kind::Symbolic => {
                let syms = |rows: &[usize]| -> Vec<&'c str> {
                    rows.iter()
                        .filter_map(|&r| match cell(r, col) {
                            Cell::Sym(s) => Some(s.as_str()),
                            _ => None,
                        })
                        .collect()
                };
                bins.extend(symbolic_bins(col, &syms(best), &syms(rest)));
            }
        }
    }
    bins
}

/// A bin together with its contrast score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeRule {
    pub bin: Bin,
    pub score: f64,
}

/// Contrast score `b^2 / (r + epsilon)`, where `b` and `r` are the bin's
/// frequencies within BEST and REST.
pub fn score_range(bin: &Bin, n_best: usize, n_rest: usize, epsilon: f64) -> Result<f64> {
    if n_best == 0 || n_rest == 0 {
        return Err(Error::Config(format!(
            "group sizes must be positive (best {n_best}, rest {n_rest})"
        )));
    }
    let b = bin.best as f64 / n_best as f64;
    let r = bin.rest as f64 / n_rest as f64;
    Ok(b * b / (r + epsilon))
}

/// Highest score first; ties go to the lower column, then the lower range or
/// the lexically smaller symbol.
fn rule_order(a: &RangeRule, b: &RangeRule) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then(a.bin.col.cmp(&b.bin.col))
        .then_with(|| match (&a.bin.span, &b.bin.span) {
            (Span::Range { lo: x, .. }, Span::Range { lo: y, .. }) => x.total_cmp(y),
            (Span::Symbol(x), Span::Symbol(y)) => x.cmp(y),
            (Span::Range { .. }, Span::Symbol(_)) => Ordering::Less,
            (Span::Symbol(_), Span::Range { .. }) => Ordering::Greater,
        })
}

/// The rule `acquire` would impose.
pub fn top_rule(rules: &[RangeRule]) -> Option<&RangeRule> {
    rules.iter().min_by(|a, b| rule_order(a, b))
}

/// Picks the next row to label: uniformly among `unlabeled` rows inside the
/// top rule's bin, or uniformly among all of them when none match.
pub fn acquire<'c>(
    rules: &[RangeRule],
    unlabeled: &[usize],
    rng: &mut RunRng,
    cell: impl Fn(usize, usize) -> &'c Cell,
) -> Result<usize> {
    if unlabeled.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(rule) = top_rule(rules) {
        let matching: Vec<usize> = unlabeled
            .iter()
            .copied()
            .filter(|&r| rule.bin.contains(cell(r, rule.bin.col)))
            .collect();
        if let Some(&r) = matching.choose(rng) {
            return Ok(r);
        }
    }
    Ok(*unlabeled.choose(rng).expect("non-empty"))
}

/// Runs the optimizer on a fresh labeler over `data`.
pub fn run_ezr(data: &Dataset, cfg: &EzrConfig) -> Result<RunOutcome> {
    let mut labeler = Labeler::new(data, cfg.budget);
    herd(&mut labeler, cfg)
}

/// Runs the optimizer against an existing labeler, whose budget must match
/// `cfg.budget`.
pub fn herd(labeler: &mut Labeler<'_>, cfg: &EzrConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let pool = labeler.pool();
    if cfg.budget > pool.len() {
        return Err(Error::PoolTooSmall {
            available: pool.len(),
            requested: cfg.budget,
        });
    }
    let budget = cfg.budget.min(labeler.budget());
    let mut rng = rng_from_seed(cfg.seed);
    let goals = labeler.goals().to_vec();
    let columns = labeler.columns();
    let decision_cols = labeler.decision_cols();

    let mut seen: Vec<(usize, Vec<f64>)> = Vec::with_capacity(budget);
    for row in init_sample(pool, cfg.n_init, &mut rng)? {
        seen.push((row, labeler.label(row)?));
    }
    let mut unlabeled: Vec<usize> = pool.iter().copied().filter(|&r| !labeler.is_labeled(r)).collect();

    while seen.len() < budget && !unlabeled.is_empty() {
        let bounds = labeler.objective_bounds().expect("labeled rows");
        let scored = seen
            .iter()
            .map(|(r, ys)| Ok((*r, distance_to_heaven(ys, &bounds, &goals)?)))
            .collect::<Result<Vec<_>>>()?;
        if let Some(tau) = cfg.stop_threshold {
            if scored.iter().any(|&(_, d)| d < tau) {
                break;
            }
        }
        let (best, rest) = split_best_rest(&scored)?;
        let best: Vec<usize> = best.into_iter().map(|(r, _)| r).collect();
        let rest: Vec<usize> = rest.into_iter().map(|(r, _)| r).collect();
        let view = &*labeler;
        let rules = discretize(columns, decision_cols, &best, &rest, cfg.max_bins, |r, c| {
            view.decision_cell(r, c)
        })
        .into_iter()
        .map(|bin| {
            let score = score_range(&bin, best.len(), rest.len(), cfg.epsilon)?;
            Ok(RangeRule { bin, score })
        })
        .collect::<Result<Vec<_>>>()?;
        let next = acquire(&rules, &unlabeled, &mut rng, |r, c| view.decision_cell(r, c))?;
        seen.push((next, labeler.label(next)?));
        unlabeled.retain(|&r| r != next);
    }
    RunOutcome::from_labeler(labeler)
}
