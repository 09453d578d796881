use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::sort_labels;

/// Exact header of a predictions file.
pub const PREDICTIONS_HEADER: [&str; 4] = ["row_id", "y_true", "y_pred", "group"];

#[derive(Debug, Error)]
pub enum PredictionsError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error("column '{0}' not found")]
    MissingColumn(String),
    #[error("more than two labels: {}", .0.join(", "))]
    NonBinaryLabels(Vec<String>),
    #[error("row_id {0} occurs more than once")]
    DuplicateRowId(usize),
    #[error("line {line}: row_id '{value}' is not a non-negative integer")]
    BadRowId { line: usize, value: String },
    #[error("line {line}: expected {expected} cells, found {found}")]
    RaggedRow { line: usize, expected: usize, found: usize },
    #[error("label '{0}' is not in the label set")]
    UnknownLabel(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionEntry {
    pub row_id: usize,
    pub y_true: String,
    pub y_pred: String,
    pub group: String,
}

/// Predictions with their binary label set in declared order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionSet {
    pub entries: Vec<PredictionEntry>,
    pub labels: Vec<String>,
}

impl PredictionSet {
    /// Checks row-id uniqueness and that every label is declared.
    pub fn new(entries: Vec<PredictionEntry>, mut labels: Vec<String>) -> Result<Self, PredictionsError> {
        sort_labels(&mut labels);
        labels.dedup();
        if labels.len() > 2 {
            return Err(PredictionsError::NonBinaryLabels(labels));
        }
        let mut seen = BTreeSet::new();
        for e in &entries {
            if !seen.insert(e.row_id) {
                return Err(PredictionsError::DuplicateRowId(e.row_id));
            }
            for l in [&e.y_true, &e.y_pred] {
                if !labels.contains(l) {
                    return Err(PredictionsError::UnknownLabel(l.clone()));
                }
            }
        }
        Ok(Self { entries, labels })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Default)]
pub struct ImportOptions {
    /// Column holding group membership. Defaults to `group`.
    pub group_column: Option<String>,
    /// Added to the label set when the file shows fewer than two labels.
    pub positive_label: Option<String>,
}

pub fn import_predictions(path: &Path, options: &ImportOptions) -> Result<PredictionSet, PredictionsError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| PredictionsError::Io { path: path.display().to_string(), source })?;
    parse_predictions(&text, options)
}

pub fn parse_predictions(text: &str, options: &ImportOptions) -> Result<PredictionSet, PredictionsError> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let header: Vec<String> =
        reader.headers().map_err(|e| PredictionsError::Csv(e.to_string()))?.iter().map(String::from).collect();
    let group = options.group_column.as_deref().unwrap_or("group");
    let find = |name: &str| {
        header.iter().position(|h| h == name).ok_or_else(|| PredictionsError::MissingColumn(name.to_string()))
    };
    let (ci, ct, cp, cg) = (find("row_id")?, find("y_true")?, find("y_pred")?, find(group)?);

    let mut entries = Vec::new();
    let mut labels = BTreeSet::new();
    for (k, record) in reader.records().enumerate() {
        let record = record.map_err(|e| PredictionsError::Csv(e.to_string()))?;
        let line = k + 2;
        if record.len() != header.len() {
            return Err(PredictionsError::RaggedRow { line, expected: header.len(), found: record.len() });
        }
        let raw_id = &record[ci];
        let row_id = raw_id.parse().map_err(|_| PredictionsError::BadRowId { line, value: raw_id.to_string() })?;
        let entry = PredictionEntry {
            row_id,
            y_true: record[ct].to_string(),
            y_pred: record[cp].to_string(),
            group: record[cg].to_string(),
        };
        labels.insert(entry.y_true.clone());
        labels.insert(entry.y_pred.clone());
        entries.push(entry);
    }
    if labels.len() > 2 {
        let mut l: Vec<String> = labels.into_iter().collect();
        sort_labels(&mut l);
        return Err(PredictionsError::NonBinaryLabels(l));
    }
    if let Some(p) = &options.positive_label {
        if labels.len() < 2 {
            labels.insert(p.clone());
        } else if !labels.contains(p) {
            return Err(PredictionsError::UnknownLabel(p.clone()));
        }
    }
    PredictionSet::new(entries, labels.into_iter().collect())
}

/// Serializes with the exact [`PREDICTIONS_HEADER`].
pub fn write_predictions(set: &PredictionSet) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(PREDICTIONS_HEADER).expect("in-memory write");
    for e in &set.entries {
        w.write_record([e.row_id.to_string().as_str(), &e.y_true, &e.y_pred, &e.group]).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}
