use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data::{ColumnKind, TabularDataset};

use super::LearnerError;

/// How one raw column becomes encoded features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ColumnEncoding {
    /// `(x - mean) / scale`.
    Numeric { mean: f64, scale: f64 },
    /// One indicator per training category; unseen values encode as zeros.
    OneHot { categories: Vec<String> },
    /// Token counts over the training vocabulary.
    BagOfWords { vocabulary: Vec<String> },
}

impl ColumnEncoding {
    fn width(&self) -> usize {
        match self {
            ColumnEncoding::Numeric { .. } => 1,
            ColumnEncoding::OneHot { categories } => categories.len(),
            ColumnEncoding::BagOfWords { vocabulary } => vocabulary.len(),
        }
    }
}

/// Feature encoder fitted on training data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Encoder {
    pub columns: Vec<String>,
    encodings: Vec<ColumnEncoding>,
}

fn tokens(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty()).map(str::to_lowercase)
}

fn parse_number(column: &str, value: &str) -> Result<f64, LearnerError> {
    value
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| LearnerError::BadValue { column: column.to_string(), value: value.to_string() })
}

impl Encoder {
    /// Fits encodings for every non-target column.
    pub fn fit(ds: &TabularDataset, allow_text: bool) -> Result<Self, LearnerError> {
        let mut columns = Vec::new();
        let mut encodings = Vec::new();
        for i in ds.feature_indices() {
            let col = &ds.columns[i];
            let enc = match col.kind {
                ColumnKind::Numeric => {
                    let xs: Vec<f64> =
                        ds.column_values(i).map(|v| parse_number(&col.name, v)).collect::<Result<_, _>>()?;
                    let n = xs.len().max(1) as f64;
                    let mean = xs.iter().sum::<f64>() / n;
                    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
                    let scale = if var > 0.0 { var.sqrt() } else { 1.0 };
                    ColumnEncoding::Numeric { mean, scale }
                }
                ColumnKind::Categorical => {
                    let mut categories: Vec<String> = ds.column_values(i).map(String::from).collect();
                    categories.sort();
                    categories.dedup();
                    ColumnEncoding::OneHot { categories }
                }
                ColumnKind::Text if allow_text => {
                    let mut vocabulary: Vec<String> = ds.column_values(i).flat_map(tokens).collect();
                    vocabulary.sort();
                    vocabulary.dedup();
                    ColumnEncoding::BagOfWords { vocabulary }
                }
                ColumnKind::Text => return Err(LearnerError::TextFeaturesUnsupported(col.name.clone())),
            };
            columns.push(col.name.clone());
            encodings.push(enc);
        }
        Ok(Self { columns, encodings })
    }

    /// Raw columns expected per row.
    pub fn arity(&self) -> usize {
        self.columns.len()
    }

    /// Length of an encoded row.
    pub fn width(&self) -> usize {
        self.encodings.iter().map(ColumnEncoding::width).sum()
    }

    pub fn encode_row(&self, row: &[String]) -> Result<Vec<f64>, LearnerError> {
        if row.len() != self.arity() {
            return Err(LearnerError::ArityMismatch { expected: self.arity(), found: row.len() });
        }
        let mut out = Vec::with_capacity(self.width());
        for ((name, enc), value) in self.columns.iter().zip(&self.encodings).zip(row) {
            match enc {
                ColumnEncoding::Numeric { mean, scale } => out.push((parse_number(name, value)? - mean) / scale),
                ColumnEncoding::OneHot { categories } => {
                    out.extend(categories.iter().map(|c| if c == value { 1.0 } else { 0.0 }))
                }
                ColumnEncoding::BagOfWords { vocabulary } => {
                    let mut counts: BTreeMap<String, f64> = BTreeMap::new();
                    for t in tokens(value) {
                        *counts.entry(t).or_default() += 1.0;
                    }
                    out.extend(vocabulary.iter().map(|w| counts.get(w).copied().unwrap_or(0.0)));
                }
            }
        }
        Ok(out)
    }

    /// Feature cells of `ds` in encoder column order.
    pub fn raw_rows(&self, ds: &TabularDataset) -> Result<Vec<Vec<String>>, LearnerError> {
        let idx: Vec<usize> = self
            .columns
            .iter()
            .map(|c| ds.column_index(c).ok_or_else(|| LearnerError::MissingColumn(c.clone())))
            .collect::<Result<_, _>>()?;
        Ok(ds.rows.iter().map(|r| idx.iter().map(|&i| r[i].clone()).collect()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{parse_csv, LoadOptions};

    #[test]
    fn standardizes_and_one_hot_encodes() {
        let ds = parse_csv("x,c,y\n1,a,0\n3,b,1\n", &LoadOptions::default().with_target("y")).unwrap();
        let enc = Encoder::fit(&ds, false).unwrap();
        assert_eq!(enc.width(), 3);
        assert_eq!(enc.encode_row(&["1".into(), "b".into()]).unwrap(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(enc.encode_row(&["2".into(), "zzz".into()]).unwrap(), vec![0.0, 0.0, 0.0]);
        assert!(matches!(enc.encode_row(&["2".into()]), Err(LearnerError::ArityMismatch { expected: 2, found: 1 })));
    }

    #[test]
    fn text_needs_permission() {
        let opts = LoadOptions { text_columns: vec!["t".into()], ..Default::default() }.with_target("y");
        let ds = parse_csv("t,y\nGood day,0\nbad day,1\n", &opts).unwrap();
        assert!(matches!(Encoder::fit(&ds, false), Err(LearnerError::TextFeaturesUnsupported(_))));
        let enc = Encoder::fit(&ds, true).unwrap();
        assert_eq!(enc.encode_row(&["day, day!".into()]).unwrap(), vec![0.0, 2.0, 0.0]);
    }
}
