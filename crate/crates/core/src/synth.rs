//! Synthetic pools where only a few decision columns matter.
//!
//! Decisions are uniform on `[0, 1]`. Each objective is the mean squared
//! distance of the key columns to a hidden target point (one target per
//! objective), plus optional Gaussian noise, and is minimized. The remaining
//! columns have no influence at all.

use std::path::Path;

use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::dataset::{parse_header, Cell, Dataset};
use crate::error::{Error, Result};
use crate::evalstats::reference_optimal;
use crate::ezr::rng_from_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub rows: usize,
    pub attrs: usize,
    pub keys: usize,
    pub objectives: usize,
    pub noise: f64,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        SynthSpec {
            rows: 1000,
            attrs: 20,
            keys: 3,
            objectives: 1,
            noise: 0.0,
            seed: 0,
        }
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.rows < 16 {
            return fail(format!("rows must be >= 16, got {}", self.rows));
        }
        if self.attrs == 0 {
            return fail("attrs must be >= 1".into());
        }
        if self.keys == 0 || self.keys > self.attrs {
            return fail(format!("keys must be in 1..={}, got {}", self.attrs, self.keys));
        }
        if self.objectives == 0 {
            return fail("objectives must be >= 1".into());
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return fail(format!("noise must be a finite value >= 0, got {}", self.noise));
        }
        Ok(())
    }
}

/// The hidden response: which columns matter and where each objective's
/// target sits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Surface {
    /// Decision column indices that drive the objectives, ascending.
    pub keys: Vec<usize>,
    /// One target per objective, one coordinate per key.
    pub targets: Vec<Vec<f64>>,
}

impl Surface {
    /// Noise-free objective values for a full row of decision values.
    pub fn evaluate(&self, decisions: &[f64]) -> Vec<f64> {
        self.targets
            .iter()
            .map(|t| {
                self.keys
                    .iter()
                    .zip(t)
                    .map(|(&k, &c)| (decisions[k] - c).powi(2))
                    .sum::<f64>()
                    / self.keys.len() as f64
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct Synthetic {
    pub data: Dataset,
    /// Row closest to heaven on the noise-free objectives.
    pub optimum: usize,
    pub surface: Surface,
    pub spec: SynthSpec,
}

/// Sidecar written next to a generated CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthManifest {
    pub spec: SynthSpec,
    pub optimum: usize,
    pub keys: Vec<usize>,
    pub targets: Vec<Vec<f64>>,
}

pub fn column_names(spec: &SynthSpec) -> Vec<String> {
    let width = spec.attrs.saturating_sub(1).to_string().len();
    (0..spec.attrs)
        .map(|i| format!("A{i:0width$}"))
        .chain((0..spec.objectives).map(|j| format!("Y{j}-")))
        .collect()
}

pub fn gen_sparse(spec: &SynthSpec) -> Result<Synthetic> {
    spec.validate()?;
    let mut rng = rng_from_seed(spec.seed);
    let mut keys = index::sample(&mut rng, spec.attrs, spec.keys).into_vec();
    keys.sort_unstable();
    let targets: Vec<Vec<f64>> = (0..spec.objectives)
        .map(|_| (0..spec.keys).map(|_| rng.random::<f64>()).collect())
        .collect();
    let surface = Surface { keys, targets };
    let noise = (spec.noise > 0.0)
        .then(|| Normal::new(0.0, spec.noise).map_err(|e| Error::Config(e.to_string())))
        .transpose()?;

    let mut clean = Vec::with_capacity(spec.rows);
    let mut noisy = Vec::with_capacity(spec.rows);
    for _ in 0..spec.rows {
        let xs: Vec<f64> = (0..spec.attrs).map(|_| rng.random::<f64>()).collect();
        let ys = surface.evaluate(&xs);
        let mut cells: Vec<Cell> = xs.iter().map(|&x| Cell::Num(x)).collect();
        cells.extend(ys.iter().map(|&y| {
            Cell::Num(match &noise {
                Some(n) => y + n.sample(&mut rng),
                None => y,
            })
        }));
        noisy.push(cells);
        let mut plain: Vec<Cell> = xs.into_iter().map(Cell::Num).collect();
        plain.extend(ys.into_iter().map(Cell::Num));
        clean.push(plain);
    }
    let columns = parse_header(&column_names(spec))?;
    let name = format!(
        "synth_r{}_a{}_k{}_o{}_s{}",
        spec.rows, spec.attrs, spec.keys, spec.objectives, spec.seed
    );
    let (optimum, _) = reference_optimal(&Dataset::new(name.clone(), columns.clone(), clean)?)?;
    Ok(Synthetic {
        data: Dataset::new(name, columns, noisy)?,
        optimum,
        surface,
        spec: spec.clone(),
    })
}

impl Synthetic {
    pub fn manifest(&self) -> SynthManifest {
        SynthManifest {
            spec: self.spec.clone(),
            optimum: self.optimum,
            keys: self.surface.keys.clone(),
            targets: self.surface.targets.clone(),
        }
    }

    /// Writes `<path>` as CSV and `<path with .json extension>` as the sidecar.
    pub fn save(&self, csv_path: impl AsRef<Path>) -> Result<std::path::PathBuf> {
        let csv_path = csv_path.as_ref();
        self.data.save_csv(csv_path)?;
        let json_path = csv_path.with_extension("json");
        let mut text = serde_json::to_string_pretty(&self.manifest())?;
        text.push('\n');
        std::fs::write(&json_path, text)?;
        Ok(json_path)
    }
}

/// The suite used for the budget sweep checks: `count` pools of 5000 rows and
/// 20 attributes, cycling 1..=5 keys and 1..=3 objectives, noise 0.05.
pub fn benchmark_suite(count: usize, base_seed: u64) -> Vec<SynthSpec> {
    (0..count)
        .map(|i| SynthSpec {
            rows: 5000,
            attrs: 20,
            keys: i % 5 + 1,
            objectives: i % 3 + 1,
            noise: 0.05,
            seed: base_seed + i as u64,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_key_optimum_is_nearest_to_target() {
        let s = gen_sparse(&SynthSpec {
            rows: 200,
            attrs: 5,
            keys: 1,
            objectives: 1,
            noise: 0.0,
            seed: 3,
        })
        .unwrap();
        let k = s.surface.keys[0];
        let t = s.surface.targets[0][0];
        let nearest = s
            .data
            .rows()
            .iter()
            .min_by(|a, b| {
                let da = (a.cells[k].as_num().unwrap() - t).abs();
                let db = (b.cells[k].as_num().unwrap() - t).abs();
                da.total_cmp(&db)
            })
            .unwrap()
            .id;
        assert_eq!(s.optimum, nearest);
    }

    #[test]
    fn all_keys() {
        let s = gen_sparse(&SynthSpec {
            rows: 50,
            attrs: 4,
            keys: 4,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(s.surface.keys, vec![0, 1, 2, 3]);
    }

    #[test]
    fn invalid_specs() {
        let base = SynthSpec::default();
        for bad in [
            SynthSpec { rows: 15, ..base.clone() },
            SynthSpec { keys: 0, ..base.clone() },
            SynthSpec { keys: 30, attrs: 20, ..base.clone() },
            SynthSpec { objectives: 0, ..base.clone() },
            SynthSpec { noise: -1.0, ..base.clone() },
            SynthSpec { noise: f64::NAN, ..base.clone() },
        ] {
            assert!(gen_sparse(&bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn same_spec_same_bytes() {
        let spec = SynthSpec { rows: 100, noise: 0.1, ..Default::default() };
        let mut a = Vec::new();
        let mut b = Vec::new();
        gen_sparse(&spec).unwrap().data.write_csv(&mut a).unwrap();
        gen_sparse(&spec).unwrap().data.write_csv(&mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn header_shape() {
        let names = column_names(&SynthSpec { attrs: 12, objectives: 2, ..Default::default() });
        assert_eq!(names.first().unwrap(), "A00");
        assert_eq!(&names[12..], ["Y0-", "Y1-"]);
    }

    #[test]
    fn suite_cycles_keys_and_objectives() {
        let suite = benchmark_suite(20, 100);
        assert_eq!(suite.len(), 20);
        assert!((1..=5).all(|k| suite.iter().filter(|s| s.keys == k).count() == 4));
        assert!((1..=3).all(|o| suite.iter().any(|s| s.objectives == o)));
        assert!(suite.iter().all(|s| s.validate().is_ok()));
    }
}
