//! Sweeps of methods × budgets × seeds over a corpus of datasets.

use std::fmt::{self, Write as _};
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::{run_kpp, run_random};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::evalstats::{mean_optimality, rank_methods, Evaluator, RankEntry, RunRecord};
use crate::ezr::{run_ezr, EzrConfig, RunOutcome};

pub const DEFAULT_BUDGETS: [usize; 5] = [8, 16, 32, 64, 128];
pub const DEFAULT_REPEATS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Ezr,
    Random,
    Kpp,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Ezr, Method::Random, Method::Kpp];

    pub fn name(self) -> &'static str {
        match self {
            Method::Ezr => "ezr",
            Method::Random => "random",
            Method::Kpp => "kpp",
        }
    }

    pub fn run(self, data: &Dataset, budget: usize, seed: u64) -> Result<RunOutcome> {
        match self {
            Method::Ezr => run_ezr(data, &ezr_config(budget, seed)),
            Method::Random => run_random(data, budget, seed),
            Method::Kpp => run_kpp(data, budget, seed),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown method `{s}` (expected ezr, random or kpp)")))
    }
}

/// Default settings with the initial sample shrunk to fit small budgets.
pub fn ezr_config(budget: usize, seed: u64) -> EzrConfig {
    let d = EzrConfig::default();
    EzrConfig {
        n_init: d.n_init.min(budget),
        budget,
        seed,
        ..d
    }
}

/// Runs one method and scores its pick against the whole dataset.
pub fn run_cell(data: &Dataset, eval: &Evaluator, method: Method, budget: usize, seed: u64) -> Result<RunRecord> {
    let start = Instant::now();
    let outcome = method.run(data, budget, seed)?;
    let wall_time = start.elapsed().as_secs_f64();
    let best_d = eval.distance(data, outcome.best_row)?;
    Ok(RunRecord {
        dataset: data.name().to_string(),
        method: method.name().to_string(),
        budget,
        seed,
        best_d,
        optimality: eval.optimality(best_d),
        wall_time,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchPlan {
    pub datasets: Vec<PathBuf>,
    pub methods: Vec<Method>,
    pub budgets: Vec<usize>,
    pub repeats: usize,
    pub base_seed: u64,
    pub output: PathBuf,
}

impl BenchPlan {
    pub fn validate(&self) -> Result<()> {
        if self.datasets.is_empty() || self.methods.is_empty() || self.budgets.is_empty() {
            return Err(Error::Config("plan needs datasets, methods and budgets".into()));
        }
        if self.repeats == 0 {
            return Err(Error::Config("repeats must be >= 1".into()));
        }
        if self.budgets.contains(&0) {
            return Err(Error::Config("budgets must be >= 1".into()));
        }
        Ok(())
    }
}

/// A dataset loaded and prepared for scoring.
pub struct Prepared {
    pub data: Dataset,
    pub eval: Evaluator,
}

/// Loads and prepares every dataset, or reports all failures at once.
pub fn prepare_all(paths: &[PathBuf]) -> Result<Vec<Prepared>> {
    let results: Vec<Result<Prepared>> = paths
        .par_iter()
        .map(|p| {
            let data = Dataset::load_csv(p)?;
            let eval = Evaluator::new(&data).map_err(|e| Error::Load {
                path: p.clone(),
                source: Box::new(e),
            })?;
            Ok(Prepared { data, eval })
        })
        .collect();
    let mut ok = Vec::new();
    let mut bad = Vec::new();
    for r in results {
        match r {
            Ok(p) => ok.push(p),
            Err(e) => bad.push(e.to_string()),
        }
    }
    if !bad.is_empty() {
        return Err(Error::Config(format!("failed to load:\n  {}", bad.join("\n  "))));
    }
    Ok(ok)
}

/// Executes every (dataset, method, budget, repeat) cell of `prepared`,
/// possibly in parallel, and returns records in plan order. The seed of
/// repeat `i` is `base_seed + i`.
pub fn run_cells(
    prepared: &[Prepared],
    methods: &[Method],
    budgets: &[usize],
    repeats: usize,
    base_seed: u64,
) -> Result<Vec<RunRecord>> {
    let mut cells = Vec::new();
    for (d, _) in prepared.iter().enumerate() {
        for &m in methods {
            for &b in budgets {
                for i in 0..repeats {
                    cells.push((d, m, b, base_seed + i as u64));
                }
            }
        }
    }
    cells
        .into_par_iter()
        .map(|(d, m, b, seed)| {
            let p = &prepared[d];
            run_cell(&p.data, &p.eval, m, b, seed).map_err(|e| {
                Error::Config(format!("{} / {m} / budget {b} / seed {seed}: {e}", p.data.name()))
            })
        })
        .collect()
}

/// Runs the plan and writes its JSONL file. Nothing is written unless every
/// dataset loads and every cell succeeds.
pub fn run_bench(plan: &BenchPlan) -> Result<Vec<RunRecord>> {
    plan.validate()?;
    let prepared = prepare_all(&plan.datasets)?;
    let records = run_cells(&prepared, &plan.methods, &plan.budgets, plan.repeats, plan.base_seed)?;
    let mut buf = Vec::new();
    write_jsonl(&mut buf, &records)?;
    std::fs::write(&plan.output, buf)?;
    Ok(records)
}

pub fn write_jsonl(mut w: impl Write, records: &[RunRecord]) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_jsonl(r: impl BufRead) -> Result<Vec<RunRecord>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line).map_err(|e| Error::Record {
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(rec);
    }
    if out.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(out)
}

pub fn load_records(path: impl AsRef<Path>) -> Result<Vec<RunRecord>> {
    let f = std::fs::File::open(path)?;
    read_jsonl(std::io::BufReader::new(f))
}

/// Win fractions and mean optimality, ready to print.
#[derive(Debug, Clone)]
pub struct RankReport {
    pub ranks: Vec<RankEntry>,
    pub means: Vec<(String, usize, f64)>,
}

impl RankReport {
    pub fn from_records(records: &[RunRecord]) -> Result<Self> {
        let ranks = rank_methods(records)?;
        let means = mean_optimality(records)
            .into_iter()
            .map(|((m, b), v)| (m, b, v))
            .collect();
        Ok(RankReport { ranks, means })
    }

    fn methods(&self) -> Vec<&str> {
        let mut ms: Vec<&str> = self.ranks.iter().map(|r| r.method.as_str()).collect();
        ms.sort();
        ms.dedup();
        ms
    }

    fn budgets(&self) -> Vec<usize> {
        let mut bs: Vec<usize> = self.ranks.iter().map(|r| r.budget).collect();
        bs.sort();
        bs.dedup();
        bs
    }

    pub fn win_fraction(&self, method: &str, budget: usize) -> Option<f64> {
        self.ranks
            .iter()
            .find(|r| r.method == method && r.budget == budget)
            .map(RankEntry::win_fraction)
    }

    pub fn mean(&self, method: &str, budget: usize) -> Option<f64> {
        self.means
            .iter()
            .find(|(m, b, _)| m == method && *b == budget)
            .map(|t| t.2)
    }

    fn grid(&self, title: &str, cell: impl Fn(&str, usize) -> Option<f64>) -> String {
        let budgets = self.budgets();
        let mut s = String::new();
        let _ = write!(s, "{title:<10}");
        for b in &budgets {
            let _ = write!(s, "{b:>8}");
        }
        s.push('\n');
        for m in self.methods() {
            let _ = write!(s, "{m:<10}");
            for &b in &budgets {
                match cell(m, b) {
                    Some(v) => {
                        let _ = write!(s, "{v:>8.2}");
                    }
                    None => {
                        let _ = write!(s, "{:>8}", "-");
                    }
                }
            }
            s.push('\n');
        }
        s
    }

    /// Methods by budgets, cells are win fractions.
    pub fn win_table(&self) -> String {
        self.grid("wins", |m, b| self.win_fraction(m, b))
    }

    /// Methods by budgets, cells are mean optimality.
    pub fn optimality_table(&self) -> String {
        self.grid("optimal", |m, b| self.mean(m, b))
    }

    /// `method,budget,win_fraction` rows.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("method,budget,win_fraction\n");
        let mut rows: Vec<&RankEntry> = self.ranks.iter().collect();
        rows.sort_by(|a, b| a.method.cmp(&b.method).then(a.budget.cmp(&b.budget)));
        for r in rows {
            let _ = writeln!(s, "{},{},{}", r.method, r.budget, r.win_fraction());
        }
        s
    }
}
