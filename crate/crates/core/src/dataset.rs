//! Typed tabular pools of candidate configurations.
//!
//! Column roles and types come from the header names:
//!
//! * a trailing `+` marks an objective to maximize, a trailing `-` one to minimize;
//! * a trailing `X` marks a column the optimizer ignores;
//! * anything else is a decision;
//! * an uppercase first character means numeric, otherwise symbolic.
//!
//! Cells holding `?` are missing. A row with a missing objective cell cannot be
//! labeled and is left out of the pool.

use std::collections::HashSet;
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MISSING: &str = "?";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    Numeric,
    Symbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Goal {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    Decision,
    Objective(Goal),
    Ignored,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnSpec {
    pub name: String,
    pub kind: Kind,
    pub role: Role,
    pub index: usize,
}

impl ColumnSpec {
    pub fn goal(&self) -> Option<Goal> {
        match self.role {
            Role::Objective(g) => Some(g),
            _ => None,
        }
    }

    pub fn is_decision(&self) -> bool {
        self.role == Role::Decision
    }

    pub fn is_objective(&self) -> bool {
        matches!(self.role, Role::Objective(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Sym(String),
    Missing,
}

impl Cell {
    pub fn as_num(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            _ => None,
        }
    }

    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(x) => write!(f, "{x}"),
            Cell::Sym(s) => f.write_str(s),
            Cell::Missing => f.write_str(MISSING),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub id: usize,
    pub cells: Vec<Cell>,
}

/// Classifies header names into typed columns.
pub fn parse_header<S: AsRef<str>>(names: &[S]) -> Result<Vec<ColumnSpec>> {
    if names.is_empty() {
        return Err(Error::EmptyHeader);
    }
    let mut seen = HashSet::new();
    let mut cols = Vec::with_capacity(names.len());
    for (index, raw) in names.iter().enumerate() {
        let name = raw.as_ref().trim();
        let Some(first) = name.chars().next() else {
            return Err(Error::EmptyColumnName { index });
        };
        if !seen.insert(name.to_string()) {
            return Err(Error::DuplicateColumn(name.to_string()));
        }
        let kind = if first.is_uppercase() {
            Kind::Numeric
        } else {
            Kind::Symbolic
        };
        let role = if name.ends_with('+') {
            Role::Objective(Goal::Maximize)
        } else if name.ends_with('-') {
            Role::Objective(Goal::Minimize)
        } else if name.ends_with('X') {
            Role::Ignored
        } else {
            Role::Decision
        };
        if matches!(role, Role::Objective(_)) && kind == Kind::Symbolic {
            return Err(Error::SymbolicObjective(name.to_string()));
        }
        cols.push(ColumnSpec {
            name: name.to_string(),
            kind,
            role,
            index,
        });
    }
    if !cols.iter().any(ColumnSpec::is_objective) {
        return Err(Error::NoObjectives);
    }
    if !cols.iter().any(ColumnSpec::is_decision) {
        return Err(Error::NoDecisions);
    }
    Ok(cols)
}

/// An immutable table of rows. Objective columns are always numeric.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    columns: Vec<ColumnSpec>,
    rows: Vec<Row>,
    decisions: Vec<usize>,
    objectives: Vec<usize>,
    pool: Vec<usize>,
}

impl Dataset {
    /// Builds a dataset from already-typed rows, checking shape and cell types.
    /// Row ids are reassigned in order starting at 0.
    pub fn new(name: impl Into<String>, columns: Vec<ColumnSpec>, rows: Vec<Vec<Cell>>) -> Result<Self> {
        let width = columns.len();
        let mut out = Vec::with_capacity(rows.len());
        for (id, cells) in rows.into_iter().enumerate() {
            if cells.len() != width {
                return Err(Error::RaggedRow {
                    row: id,
                    expected: width,
                    found: cells.len(),
                });
            }
            for (col, cell) in columns.iter().zip(&cells) {
                let ok = match (col.kind, cell) {
                    (_, Cell::Missing) => true,
                    (Kind::Numeric, Cell::Num(x)) => x.is_finite(),
                    (Kind::Symbolic, Cell::Sym(_)) => true,
                    _ => false,
                };
                if !ok {
                    return Err(Error::BadNumber {
                        row: id,
                        column: col.name.clone(),
                        value: cell.to_string(),
                    });
                }
            }
            out.push(Row { id, cells });
        }
        let decisions = columns.iter().filter(|c| c.is_decision()).map(|c| c.index).collect();
        let objectives: Vec<usize> = columns.iter().filter(|c| c.is_objective()).map(|c| c.index).collect();
        let pool = out
            .iter()
            .filter(|r| objectives.iter().all(|&c| !r.cells[c].is_missing()))
            .map(|r| r.id)
            .collect();
        Ok(Dataset {
            name: name.into(),
            columns,
            rows: out,
            decisions,
            objectives,
            pool,
        })
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let wrap = |e: Error| Error::Load {
            path: path.to_path_buf(),
            source: Box::new(e),
        };
        let file = std::fs::File::open(path).map_err(|e| wrap(e.into()))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self::from_reader(name, file).map_err(wrap)
    }

    pub fn from_reader(name: impl Into<String>, reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut records = rdr.records();
        let header = match records.next() {
            Some(h) => h?,
            None => return Err(Error::EmptyFile),
        };
        let names: Vec<&str> = header.iter().collect();
        if names.iter().all(|n| n.is_empty()) {
            return Err(Error::EmptyFile);
        }
        let columns = parse_header(&names)?;
        let mut rows = Vec::new();
        for (row, rec) in records.enumerate() {
            let rec = rec?;
            if rec.len() != columns.len() {
                return Err(Error::RaggedRow {
                    row,
                    expected: columns.len(),
                    found: rec.len(),
                });
            }
            let cells = columns
                .iter()
                .zip(rec.iter())
                .map(|(col, raw)| parse_cell(col, raw, row))
                .collect::<Result<Vec<_>>>()?;
            rows.push(cells);
        }
        Self::new(name, columns, rows)
    }

    pub fn write_csv(&self, writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(self.columns.iter().map(|c| c.name.as_str()))?;
        for row in &self.rows {
            w.write_record(row.cells.iter().map(Cell::to_string))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn columns(&self) -> &[ColumnSpec] {
        &self.columns
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn row(&self, id: usize) -> &Row {
        &self.rows[id]
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Indices of decision columns, in column order.
    pub fn decision_cols(&self) -> &[usize] {
        &self.decisions
    }

    /// Indices of objective columns, in column order.
    pub fn objective_cols(&self) -> &[usize] {
        &self.objectives
    }

    pub fn goals(&self) -> Vec<Goal> {
        self.objectives
            .iter()
            .map(|&c| self.columns[c].goal().expect("objective column"))
            .collect()
    }

    /// Ids of rows whose objectives are all present.
    pub fn pool(&self) -> &[usize] {
        &self.pool
    }

    /// Objective values of a labelable row, in objective-column order.
    pub fn objectives(&self, id: usize) -> Option<Vec<f64>> {
        self.objectives
            .iter()
            .map(|&c| self.rows[id].cells[c].as_num())
            .collect()
    }
}

fn parse_cell(col: &ColumnSpec, raw: &str, row: usize) -> Result<Cell> {
    if raw == MISSING {
        return Ok(Cell::Missing);
    }
    match col.kind {
        Kind::Symbolic => Ok(Cell::Sym(raw.to_string())),
        Kind::Numeric => match raw.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(Cell::Num(x)),
            _ => Err(Error::BadNumber {
                row,
                column: col.name.clone(),
                value: raw.to_string(),
            }),
        },
    }
}

/// Reads a corpus manifest: one dataset path per line. Blank lines and lines
/// starting with `#` are skipped; relative paths resolve against the
/// manifest's directory.
pub fn read_manifest(path: impl AsRef<Path>) -> Result<Vec<std::path::PathBuf>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let base = path.parent().unwrap_or(Path::new(""));
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let p = Path::new(l);
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base.join(p)
            }
        })
        .collect())
}
