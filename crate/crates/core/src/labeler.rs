//! Budgeted access to hidden objective values.
//!
//! Optimizers never see a [`Dataset`] directly. They get a [`Labeler`], which
//! hands out decision cells freely and objective values only for rows that
//! have been labeled, charging one unit of budget per new row.

use crate::dataset::{Cell, ColumnSpec, Dataset, Goal};
use crate::error::{Error, Result};
use crate::stats::OnlineStats;

/// One recorded interaction with the labeler.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Access {
    /// A row was labeled (or re-labeled, free of charge).
    Label { row: usize, charged: bool },
    /// Objectives were requested; `granted` is false for unlabeled rows.
    Read { row: usize, granted: bool },
    /// A non-decision cell was requested through the decision accessor.
    HiddenCell { row: usize, col: usize },
}

pub struct Labeler<'a> {
    data: &'a Dataset,
    goals: Vec<Goal>,
    budget: usize,
    labeled: Vec<bool>,
    order: Vec<usize>,
    stats: Vec<OnlineStats>,
    log: Option<Vec<Access>>,
    violations: usize,
}

impl<'a> Labeler<'a> {
    pub fn new(data: &'a Dataset, budget: usize) -> Self {
        let k = data.objective_cols().len();
        Labeler {
            data,
            goals: data.goals(),
            budget,
            labeled: vec![false; data.len()],
            order: Vec::new(),
            stats: vec![OnlineStats::new(); k],
            log: None,
            violations: 0,
        }
    }

    /// A labeler that also keeps a full access log.
    pub fn instrumented(data: &'a Dataset, budget: usize) -> Self {
        let mut l = Self::new(data, budget);
        l.log = Some(Vec::new());
        l
    }

    fn record(&mut self, a: Access) {
        if let Some(log) = &mut self.log {
            log.push(a);
        }
    }

    /// Reveals a row's objectives, charging the budget if it is new.
    pub fn label(&mut self, row: usize) -> Result<Vec<f64>> {
        if self.data.pool().binary_search(&row).is_err() {
            return Err(Error::NotInPool(row));
        }
        let charged = !self.labeled[row];
        if charged {
            if self.order.len() >= self.budget {
                return Err(Error::BudgetExhausted { budget: self.budget });
            }
            self.labeled[row] = true;
            self.order.push(row);
        }
        self.record(Access::Label { row, charged });
        let ys = self.data.objectives(row).expect("pool rows have objectives");
        if charged {
            for (s, &y) in self.stats.iter_mut().zip(&ys) {
                s.add(y)?;
            }
        }
        Ok(ys)
    }

    /// Objectives of an already-labeled row. Requests for unlabeled rows are
    /// refused and counted as violations.
    pub fn objectives(&mut self, row: usize) -> Option<Vec<f64>> {
        let granted = self.labeled.get(row).copied().unwrap_or(false);
        self.record(Access::Read { row, granted });
        if granted {
            self.data.objectives(row)
        } else {
            self.violations += 1;
            None
        }
    }

    /// A decision cell. Objective and ignored columns read as missing and are
    /// counted as violations.
    pub fn decision(&mut self, row: usize, col: usize) -> &'a Cell {
        if self.data.columns()[col].is_decision() {
            &self.data.row(row).cells[col]
        } else {
            self.violations += 1;
            self.record(Access::HiddenCell { row, col });
            &Cell::Missing
        }
    }

    /// Decision cell without logging; callers pass only decision columns.
    pub(crate) fn decision_cell(&self, row: usize, col: usize) -> &'a Cell {
        debug_assert!(self.data.columns()[col].is_decision());
        &self.data.row(row).cells[col]
    }

    pub fn columns(&self) -> &'a [ColumnSpec] {
        self.data.columns()
    }

    pub fn decision_cols(&self) -> &'a [usize] {
        self.data.decision_cols()
    }

    pub fn goals(&self) -> &[Goal] {
        &self.goals
    }

    pub fn pool(&self) -> &'a [usize] {
        self.data.pool()
    }

    pub fn is_labeled(&self, row: usize) -> bool {
        self.labeled.get(row).copied().unwrap_or(false)
    }

    /// Labeled rows in labeling order.
    pub fn labeled(&self) -> &[usize] {
        &self.order
    }

    pub fn used(&self) -> usize {
        self.order.len()
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn remaining(&self) -> usize {
        self.budget - self.order.len()
    }

    /// Running statistics of each objective over labeled rows.
    pub fn objective_stats(&self) -> &[OnlineStats] {
        &self.stats
    }

    /// Per-objective `(lo, hi)` over labeled rows; `None` before any label.
    pub fn objective_bounds(&self) -> Option<Vec<(f64, f64)>> {
        self.stats.iter().map(OnlineStats::bounds).collect()
    }

    pub fn violations(&self) -> usize {
        self.violations
    }

    pub fn log(&self) -> Option<&[Access]> {
        self.log.as_deref()
    }
}
