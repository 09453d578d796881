//! Tabular datasets: CSV ingestion, profiling into the attributes that drive
//! algorithm selection, and deterministic stratified splitting.

mod csv_load;
mod profile;
mod split;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use csv_load::{load_csv, parse_csv, LoadOptions};
pub use profile::{profile, DatasetProfile, PredictionKind, ProfileOptions};
pub use split::{largest_remainder_counts, stratified_split};

#[derive(Debug, Error)]
pub enum DataError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error("file has no data rows")]
    EmptyFile,
    #[error("column '{0}' not found")]
    MissingColumn(String),
    #[error("duplicate column name '{0}'")]
    DuplicateColumn(String),
    #[error("row {row}: expected {expected} non-empty cells, found {found}")]
    RaggedRow { row: usize, expected: usize, found: usize },
    #[error("target has {0} classes; a binary target is required")]
    NonBinaryTarget(usize),
    #[error("label '{0}' does not occur in the target column")]
    UnknownLabel(String),
    #[error("dataset has no target column")]
    Unlabeled,
    #[error("stratified split needs at least two populated classes, found {0}")]
    DegenerateClass(usize),
    #[error("test fraction must lie strictly between 0 and 1, got {0}")]
    InvalidFraction(f64),
    #[error("row {row}, column '{column}': '{value}' is not a number")]
    NotNumeric { row: usize, column: String, value: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ColumnKind {
    Numeric,
    Categorical,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub kind: ColumnKind,
}

impl Column {
    pub fn new(name: impl Into<String>, kind: ColumnKind) -> Self {
        Self { name: name.into(), kind }
    }
}

/// An in-memory table of raw cell strings with typed columns.
///
/// `row_ids` carries the 1-based source row of every row so that splits and
/// predictions can refer back to the original file.
#[derive(Debug, Clone, PartialEq)]
pub struct TabularDataset {
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<String>>,
    pub row_ids: Vec<usize>,
    pub target: Option<String>,
    pub sensitive: Option<String>,
}

impl TabularDataset {
    pub fn new(
        columns: Vec<Column>,
        rows: Vec<Vec<String>>,
        target: Option<String>,
        sensitive: Option<String>,
    ) -> Result<Self, DataError> {
        for (i, r) in rows.iter().enumerate() {
            if r.len() != columns.len() {
                return Err(DataError::RaggedRow { row: i + 1, expected: columns.len(), found: r.len() });
            }
        }
        let row_ids = (1..=rows.len()).collect();
        let ds = Self { columns, rows, row_ids, target, sensitive };
        for name in [&ds.target, &ds.sensitive].into_iter().flatten() {
            ds.column_index(name).ok_or_else(|| DataError::MissingColumn(name.clone()))?;
        }
        Ok(ds)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn target_index(&self) -> Option<usize> {
        self.target.as_deref().and_then(|t| self.column_index(t))
    }

    pub fn sensitive_index(&self) -> Option<usize> {
        self.sensitive.as_deref().and_then(|s| self.column_index(s))
    }

    /// Indices of every column except the target.
    pub fn feature_indices(&self) -> Vec<usize> {
        let t = self.target_index();
        (0..self.columns.len()).filter(|i| Some(*i) != t).collect()
    }

    pub fn column_values(&self, index: usize) -> impl Iterator<Item = &str> {
        self.rows.iter().map(move |r| r[index].as_str())
    }

    /// Distinct target values in declared order (see [`sort_labels`]) with
    /// their counts.
    pub fn class_counts(&self) -> Result<Vec<(String, usize)>, DataError> {
        let t = self.target_index().ok_or(DataError::Unlabeled)?;
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for v in self.column_values(t) {
            *counts.entry(v).or_default() += 1;
        }
        let mut labels: Vec<String> = counts.keys().map(|k| k.to_string()).collect();
        sort_labels(&mut labels);
        Ok(labels
            .into_iter()
            .map(|l| {
                let n = counts[l.as_str()];
                (l, n)
            })
            .collect())
    }

    /// A dataset with the given rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> TabularDataset {
        TabularDataset {
            columns: self.columns.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            row_ids: indices.iter().map(|&i| self.row_ids[i]).collect(),
            target: self.target.clone(),
            sensitive: self.sensitive.clone(),
        }
    }
}

/// Puts labels in declared order: ascending numeric value when every label
/// is a number, byte-wise otherwise.
pub fn sort_labels(labels: &mut [String]) {
    let numeric: Option<Vec<f64>> = labels.iter().map(|l| l.parse::<f64>().ok().filter(|x| x.is_finite())).collect();
    if numeric.is_some() {
        labels.sort_by(|a, b| {
            let (x, y) = (a.parse::<f64>().unwrap(), b.parse::<f64>().unwrap());
            x.partial_cmp(&y).unwrap_or(Ordering::Equal).then_with(|| a.cmp(b))
        });
    } else {
        labels.sort();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_order_is_numeric_aware() {
        let mut v: Vec<String> = ["10", "9", "1"].map(String::from).to_vec();
        sort_labels(&mut v);
        assert_eq!(v, ["1", "9", "10"]);
        let mut v: Vec<String> = ["10", "9", "b", "a"].map(String::from).to_vec();
        sort_labels(&mut v);
        assert_eq!(v, ["10", "9", "a", "b"]);
    }

    #[test]
    fn constructor_checks_columns() {
        let cols = vec![Column::new("x", ColumnKind::Numeric)];
        let err = TabularDataset::new(cols.clone(), vec![vec!["1".into()]], Some("y".into()), None).unwrap_err();
        assert!(matches!(err, DataError::MissingColumn(c) if c == "y"));
        let err = TabularDataset::new(cols, vec![vec![]], None, None).unwrap_err();
        assert!(matches!(err, DataError::RaggedRow { row: 1, .. }));
    }
}
