//! Budget-matched comparison optimizers.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::seq::IndexedRandom;
use rand::Rng;

use crate::dataset::{Cell, Dataset, Kind};
use crate::error::{Error, Result};
use crate::ezr::{init_sample, rng_from_seed, RunOutcome, RunRng};
use crate::labeler::Labeler;

fn check_budget(labeler: &Labeler<'_>, budget: usize) -> Result<()> {
    if budget == 0 {
        return Err(Error::Config("budget must be >= 1".into()));
    }
    if budget > labeler.pool().len() {
        return Err(Error::PoolTooSmall {
            available: labeler.pool().len(),
            requested: budget,
        });
    }
    Ok(())
}

/// Labels `budget` uniformly chosen rows and returns the best of them.
pub fn run_random(data: &Dataset, budget: usize, seed: u64) -> Result<RunOutcome> {
    let mut labeler = Labeler::new(data, budget);
    random_with(&mut labeler, budget, &mut rng_from_seed(seed))
}

pub fn random_with(labeler: &mut Labeler<'_>, budget: usize, rng: &mut RunRng) -> Result<RunOutcome> {
    check_budget(labeler, budget)?;
    for row in init_sample(labeler.pool(), budget, rng)? {
        labeler.label(row)?;
    }
    RunOutcome::from_labeler(labeler)
}

/// Distance between rows over the decision columns. Numeric differences are
/// scaled by the column's range over the pool; symbols count 0 when equal and
/// 1 otherwise; a missing cell is 1 away from anything. The Euclidean total
/// is divided by `sqrt(#decision columns)`.
pub struct DecisionMetric {
    cols: Vec<(usize, Kind, f64, f64)>,
}

impl DecisionMetric {
    pub fn new(labeler: &Labeler<'_>) -> Self {
        let columns = labeler.columns();
        let cols = labeler
            .decision_cols()
            .iter()
            .map(|&c| {
                let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                if columns[c].kind == Kind::Numeric {
                    for &r in labeler.pool() {
                        if let Some(x) = labeler.decision_cell(r, c).as_num() {
                            lo = lo.min(x);
                            hi = hi.max(x);
                        }
                    }
                }
                (c, columns[c].kind, lo, hi)
            })
            .collect();
        DecisionMetric { cols }
    }

    pub fn squared(&self, labeler: &Labeler<'_>, a: usize, b: usize) -> f64 {
        let mut sum = 0.0;
        for &(c, kind, lo, hi) in &self.cols {
            let d = match (kind, labeler.decision_cell(a, c), labeler.decision_cell(b, c)) {
                (_, Cell::Missing, _) | (_, _, Cell::Missing) => 1.0,
                (Kind::Numeric, Cell::Num(x), Cell::Num(y)) => {
                    if hi > lo {
                        (x - y).abs() / (hi - lo)
                    } else {
                        0.0
                    }
                }
                (_, x, y) => {
                    if x == y {
                        0.0
                    } else {
                        1.0
                    }
                }
            };
            sum += d * d;
        }
        sum / self.cols.len() as f64
    }

    pub fn distance(&self, labeler: &Labeler<'_>, a: usize, b: usize) -> f64 {
        self.squared(labeler, a, b).sqrt()
    }
}

/// Picks `budget` rows by k-means++ seeding in decision space, labels them all
/// and returns the best.
pub fn run_kpp(data: &Dataset, budget: usize, seed: u64) -> Result<RunOutcome> {
    let mut labeler = Labeler::new(data, budget);
    kpp_with(&mut labeler, budget, &mut rng_from_seed(seed))
}

pub fn kpp_with(labeler: &mut Labeler<'_>, budget: usize, rng: &mut RunRng) -> Result<RunOutcome> {
    check_budget(labeler, budget)?;
    for row in kpp_select(labeler, budget, rng) {
        labeler.label(row)?;
    }
    RunOutcome::from_labeler(labeler)
}

/// k-means++ seeding over the pool: the first pick is uniform, each later pick
/// is drawn with probability proportional to its squared distance from the
/// nearest earlier pick. When every remaining row sits at distance zero the
/// pick is uniform over the unpicked rows.
pub fn kpp_select(labeler: &Labeler<'_>, k: usize, rng: &mut RunRng) -> Vec<usize> {
    let pool = labeler.pool();
    let metric = DecisionMetric::new(labeler);
    let mut picked = vec![false; pool.len()];
    let mut nearest = vec![f64::INFINITY; pool.len()];
    let mut out = Vec::with_capacity(k);
    let mut current = rng.random_range(0..pool.len());
    while out.len() < k {
        picked[current] = true;
        out.push(pool[current]);
        if out.len() == k {
            break;
        }
        for (i, &row) in pool.iter().enumerate() {
            if picked[i] {
                nearest[i] = 0.0;
            } else {
                nearest[i] = nearest[i].min(metric.squared(labeler, pool[current], row));
            }
        }
        current = match WeightedIndex::new(&nearest) {
            Ok(w) => w.sample(rng),
            Err(_) => {
                let open: Vec<usize> = (0..pool.len()).filter(|&i| !picked[i]).collect();
                *open.choose(rng).expect("k <= pool size")
            }
        };
    }
    out
}
