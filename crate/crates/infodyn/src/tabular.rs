//! Loading delimited text into contingency tables.
//!
//! The pipeline is: [`load_table`] parses headered CSV/TSV into a
//! [`DataTable`] of optional string cells, [`bin_column`] discretizes
//! numeric columns in place, and [`contingency`] cross-tabulates a
//! column selection into counts ready for
//! [`JointDistribution`](crate::prob::JointDistribution).
//!
//! Missing cells (empty fields) either become the explicit category
//! `"∅"` or drop their whole row, per [`MissingPolicy`]. Columns that
//! still hold raw non-integer numbers are rejected at the contingency
//! stage: cross-tabulating unbinned measurements is almost always an
//! error, as every distinct reading would become its own category.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use thiserror::Error;

use crate::prob::JointDistribution;

/// Category label assigned to missing cells under [`MissingPolicy::Label`].
pub const MISSING_LABEL: &str = "∅";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TabularError {
    #[error("Io: {0}")]
    Io(String),
    #[error("Parse: {0}")]
    Parse(String),
    #[error("EmptyInput: no data rows")]
    EmptyInput,
    #[error("RaggedRow: row {row} has {got} fields, header has {expected}")]
    RaggedRow {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("DuplicateHeader: column {0:?} appears more than once")]
    DuplicateHeader(String),
    #[error("UnknownColumn: no column named {0:?}")]
    UnknownColumn(String),
    #[error("DuplicateColumn: column {0:?} selected more than once")]
    DuplicateColumn(String),
    #[error("NonNumericColumn: column {column:?} holds non-numeric value {value:?}")]
    NonNumericColumn { column: String, value: String },
    #[error("TooFewDistinctValues: column {column:?} has {distinct} distinct values, need at least {bins}")]
    TooFewDistinctValues {
        column: String,
        distinct: usize,
        bins: usize,
    },
    #[error("InvalidBinCount: need at least 2 bins, got {0}")]
    InvalidBinCount(usize),
    #[error("UnbinnedNumericColumn: column {0:?} holds raw numeric values, bin it first")]
    UnbinnedNumericColumn(String),
    #[error("EmptySelection: no columns selected")]
    EmptySelection,
}

pub type Result<T> = std::result::Result<T, TabularError>;

/// A parsed table: named columns over rows of optional string cells.
/// `None` marks a missing (empty) cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Option<String>>>,
}

impl DataTable {
    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| TabularError::UnknownColumn(name.to_string()))
    }
}

/// Parses headered delimited text. The first record names the columns;
/// every following record must have the same width ([`TabularError::RaggedRow`]
/// reports 1-based row numbers counting the header as row 1). Cells are
/// whitespace-trimmed; empty cells become `None`.
pub fn load_table(reader: impl Read, delimiter: u8) -> Result<DataTable> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .delimiter(delimiter)
        .from_reader(reader);
    let mut records = csv_reader.records();
    let header_record = match records.next() {
        None => return Err(TabularError::EmptyInput),
        Some(r) => r.map_err(|e| TabularError::Parse(e.to_string()))?,
    };
    let headers: Vec<String> = header_record
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let mut seen = std::collections::HashSet::new();
    for h in &headers {
        if !seen.insert(h.as_str()) {
            return Err(TabularError::DuplicateHeader(h.clone()));
        }
    }
    let mut rows = Vec::new();
    for (offset, record) in records.enumerate() {
        let record = record.map_err(|e| TabularError::Parse(e.to_string()))?;
        if record.len() != headers.len() {
            return Err(TabularError::RaggedRow {
                row: offset + 2,
                got: record.len(),
                expected: headers.len(),
            });
        }
        rows.push(
            record
                .iter()
                .map(|cell| {
                    let trimmed = cell.trim();
                    if trimmed.is_empty() {
                        None
                    } else {
                        Some(trimmed.to_string())
                    }
                })
                .collect(),
        );
    }
    if rows.is_empty() {
        return Err(TabularError::EmptyInput);
    }
    Ok(DataTable { headers, rows })
}

/// Loads a table from a file, inferring the delimiter from the
/// extension: `.tsv` means tab, anything else comma.
pub fn load_table_path(path: &Path) -> Result<DataTable> {
    let delimiter = match path.extension().and_then(|e| e.to_str()) {
        Some("tsv") => b'\t',
        _ => b',',
    };
    let file = std::fs::File::open(path)
        .map_err(|e| TabularError::Io(format!("{}: {e}", path.display())))?;
    load_table(file, delimiter)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinMethod {
    /// Bin edges split the observed range `[min, max]` evenly.
    EqualWidth,
    /// Bin edges split the sorted sample into near-equal shares; ties
    /// stay together, so counts are as even as the data allows.
    EqualFrequency,
}

/// A request to discretize one numeric column into `bins` categories
/// labeled `b0`, `b1`, ...
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinningSpec {
    pub column: String,
    pub method: BinMethod,
    pub bins: usize,
}

/// Replaces a numeric column's values with bin labels, in place.
/// Missing cells stay missing. Needs at least `bins` distinct values.
pub fn bin_column(table: &mut DataTable, spec: &BinningSpec) -> Result<()> {
    if spec.bins < 2 {
        return Err(TabularError::InvalidBinCount(spec.bins));
    }
    let col = table.column_index(&spec.column)?;
    let mut values = Vec::new();
    for row in &table.rows {
        if let Some(cell) = &row[col] {
            let parsed: f64 = cell.parse().map_err(|_| TabularError::NonNumericColumn {
                column: spec.column.clone(),
                value: cell.clone(),
            })?;
            if !parsed.is_finite() {
                return Err(TabularError::NonNumericColumn {
                    column: spec.column.clone(),
                    value: cell.clone(),
                });
            }
            values.push(parsed);
        }
    }
    if values.is_empty() {
        return Err(TabularError::EmptyInput);
    }
    let mut distinct = values.clone();
    distinct.sort_by(|a, b| a.partial_cmp(b).expect("finite values compare"));
    distinct.dedup();
    if distinct.len() < spec.bins {
        return Err(TabularError::TooFewDistinctValues {
            column: spec.column.clone(),
            distinct: distinct.len(),
            bins: spec.bins,
        });
    }
    let assign: Box<dyn Fn(f64) -> usize> = match spec.method {
        BinMethod::EqualWidth => {
            let lo = distinct[0];
            let hi = *distinct.last().expect("nonempty");
            let k = spec.bins as f64;
            Box::new(move |v: f64| {
                (((v - lo) / (hi - lo) * k).floor() as usize).min(spec.bins - 1)
            })
        }
        BinMethod::EqualFrequency => {
            let n = values.len();
            let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
            for &v in &values {
                *counts.entry(v.to_bits()).or_insert(0) += 1;
            }
            let mut bin_of: std::collections::HashMap<u64, usize> =
                std::collections::HashMap::new();
            let mut cum_before = 0usize;
            for &v in &distinct {
                bin_of.insert(v.to_bits(), spec.bins * cum_before / n);
                cum_before += counts[&v.to_bits()];
            }
            Box::new(move |v: f64| bin_of[&v.to_bits()])
        }
    };
    for row in &mut table.rows {
        if let Some(cell) = &row[col] {
            let v: f64 = cell.parse().expect("validated above");
            row[col] = Some(format!("b{}", assign(v)));
        }
    }
    Ok(())
}

/// What to do with rows that have missing cells in selected columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MissingPolicy {
    /// Keep the row; the missing cell becomes the category [`MISSING_LABEL`].
    Label,
    /// Drop the whole row.
    DropRows,
}

/// A cross-tabulation of selected columns: per-column sorted category
/// alphabets and row-major cell counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    pub variables: Vec<String>,
    pub alphabets: Vec<Vec<String>>,
    pub counts: Vec<u64>,
}

impl ContingencyTable {
    pub fn shape(&self) -> Vec<usize> {
        self.alphabets.iter().map(Vec::len).collect()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn to_distribution(&self) -> crate::prob::Result<JointDistribution> {
        JointDistribution::from_counts(&self.variables, &self.alphabets, &self.counts)
    }

    pub fn to_distribution_smoothed(&self, alpha: f64) -> crate::prob::Result<JointDistribution> {
        JointDistribution::from_counts_smoothed(&self.variables, &self.alphabets, &self.counts, alpha)
    }
}

/// Cross-tabulates the selected columns. Alphabets are the sorted
/// distinct values each column takes after the missing policy is
/// applied. Columns whose surviving values are all numeric with at
/// least one non-integer are rejected as unbinned measurements
/// (integer-valued columns such as 0/1 indicators pass through as
/// categories).
pub fn contingency(
    table: &DataTable,
    variables: &[&str],
    missing: MissingPolicy,
) -> Result<ContingencyTable> {
    if variables.is_empty() {
        return Err(TabularError::EmptySelection);
    }
    let mut seen = std::collections::HashSet::new();
    for &v in variables {
        if !seen.insert(v) {
            return Err(TabularError::DuplicateColumn(v.to_string()));
        }
    }
    let cols: Vec<usize> = variables
        .iter()
        .map(|v| table.column_index(v))
        .collect::<Result<_>>()?;
    let mut selected: Vec<Vec<String>> = Vec::new();
    for row in &table.rows {
        let cells: Vec<Option<&String>> = cols.iter().map(|&c| row[c].as_ref()).collect();
        match missing {
            MissingPolicy::DropRows if cells.iter().any(Option::is_none) => continue,
            _ => {}
        }
        selected.push(
            cells
                .into_iter()
                .map(|c| c.cloned().unwrap_or_else(|| MISSING_LABEL.to_string()))
                .collect(),
        );
    }
    if selected.is_empty() {
        return Err(TabularError::EmptyInput);
    }
    for (slot, &name) in variables.iter().enumerate() {
        check_binned(name, selected.iter().map(|r| r[slot].as_str()))?;
    }
    let mut alphabets: Vec<Vec<String>> = Vec::with_capacity(cols.len());
    for slot in 0..cols.len() {
        let mut distinct: Vec<String> = selected.iter().map(|r| r[slot].clone()).collect();
        distinct.sort_unstable();
        distinct.dedup();
        alphabets.push(distinct);
    }
    let shape: Vec<usize> = alphabets.iter().map(Vec::len).collect();
    let mut counts = vec![0u64; shape.iter().product()];
    for row in &selected {
        let mut cell = 0usize;
        for (slot, value) in row.iter().enumerate() {
            let idx = alphabets[slot]
                .binary_search(value)
                .expect("alphabets cover every value");
            cell = cell * shape[slot] + idx;
        }
        counts[cell] += 1;
    }
    Ok(ContingencyTable {
        variables: variables.iter().map(|v| v.to_string()).collect(),
        alphabets,
        counts,
    })
}

fn check_binned<'a>(name: &str, mut values: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut any_fractional = false;
    let all_numeric = values.by_ref().all(|v| {
        if v == MISSING_LABEL {
            return true;
        }
        match v.parse::<f64>() {
            Ok(x) => {
                if x.fract() != 0.0 {
                    any_fractional = true;
                }
                true
            }
            Err(_) => false,
        }
    });
    if all_numeric && any_fractional {
        return Err(TabularError::UnbinnedNumericColumn(name.to_string()));
    }
    Ok(())
}
