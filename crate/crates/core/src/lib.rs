//! Label-frugal multi-objective optimization over tabular pools.
//!
//! A [`Dataset`] is a table of candidate configurations whose objective
//! columns are hidden behind a [`Labeler`]. [`ezr::run_ezr`] spends a small
//! label budget, herding its picks toward the rows closest to the ideal
//! point; [`baselines`] offers budget-matched random and k-means++ pickers;
//! [`evalstats`] scores runs and ranks methods; [`synth`] builds pools with a
//! planted set of influential columns; [`bench`] drives whole sweeps.

pub mod baselines;
pub mod bench;
pub mod dataset;
pub mod error;
pub mod evalstats;
pub mod ezr;
pub mod labeler;
pub mod scoring;
pub mod stats;
pub mod synth;

pub use dataset::{Cell, ColumnSpec, Dataset, Goal, Kind, Role};
pub use error::{Error, Result};
pub use ezr::{EzrConfig, RunOutcome};
pub use labeler::Labeler;
pub use stats::OnlineStats;
