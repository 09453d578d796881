use std::collections::BTreeSet;
use std::io::Read;
use std::path::Path;

use super::{Column, ColumnKind, DataError, TabularDataset};

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    pub target: Option<String>,
    pub sensitive: Option<String>,
    /// Columns to treat as free text regardless of their content.
    pub text_columns: Vec<String>,
}

impl LoadOptions {
    pub fn with_target(mut self, target: impl Into<String>) -> Self {
        self.target = Some(target.into());
        self
    }

    pub fn with_sensitive(mut self, sensitive: impl Into<String>) -> Self {
        self.sensitive = Some(sensitive.into());
        self
    }
}

/// Reads a comma-separated file with a header row.
///
/// Column kinds are inferred: declared text columns are TEXT, columns whose
/// every cell parses as a finite number are NUMERIC, the rest CATEGORICAL.
/// Missing cells (short rows or empty values) are rejected.
pub fn load_csv(path: impl AsRef<Path>, options: &LoadOptions) -> Result<TabularDataset, DataError> {
    let path = path.as_ref();
    let file =
        std::fs::File::open(path).map_err(|source| DataError::Io { path: path.display().to_string(), source })?;
    read_csv(file, options)
}

/// [`load_csv`] over in-memory text.
pub fn parse_csv(text: &str, options: &LoadOptions) -> Result<TabularDataset, DataError> {
    read_csv(text.as_bytes(), options)
}

fn read_csv<R: Read>(reader: R, options: &LoadOptions) -> Result<TabularDataset, DataError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(true).trim(csv::Trim::All).from_reader(reader);
    let header: Vec<String> =
        rdr.headers().map_err(|e| DataError::Csv(e.to_string()))?.iter().map(str::to_string).collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(DataError::EmptyFile);
    }
    let mut names = BTreeSet::new();
    for h in &header {
        if !names.insert(h.as_str()) {
            return Err(DataError::DuplicateColumn(h.clone()));
        }
    }
    for declared in options.target.iter().chain(&options.sensitive).chain(&options.text_columns) {
        if !names.contains(declared.as_str()) {
            return Err(DataError::MissingColumn(declared.clone()));
        }
    }

    let mut rows = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| DataError::Csv(e.to_string()))?;
        let row: Vec<String> = record.iter().map(str::to_string).collect();
        let filled = row.iter().filter(|c| !c.is_empty()).count();
        if row.len() != header.len() || filled != header.len() {
            return Err(DataError::RaggedRow { row: i + 1, expected: header.len(), found: filled.min(row.len()) });
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(DataError::EmptyFile);
    }

    let columns = header
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let kind = if options.text_columns.iter().any(|t| t == name) {
                ColumnKind::Text
            } else if rows.iter().all(|r| r[j].parse::<f64>().is_ok_and(f64::is_finite)) {
                ColumnKind::Numeric
            } else {
                ColumnKind::Categorical
            };
            Column::new(name.clone(), kind)
        })
        .collect();
    TabularDataset::new(columns, rows, options.target.clone(), options.sensitive.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infers_kinds() {
        let opts = LoadOptions { text_columns: vec!["note".into()], ..Default::default() }.with_target("y");
        let ds = parse_csv("a,b,note,y\n1,x,hello there,0\n2.5,y,bye,1\n", &opts).unwrap();
        let kinds: Vec<_> = ds.columns.iter().map(|c| c.kind).collect();
        assert_eq!(kinds, vec![ColumnKind::Numeric, ColumnKind::Categorical, ColumnKind::Text, ColumnKind::Numeric]);
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.row_ids, vec![1, 2]);
    }

    #[test]
    fn header_only_is_empty() {
        assert!(matches!(parse_csv("a,b\n", &LoadOptions::default()), Err(DataError::EmptyFile)));
        assert!(matches!(parse_csv("", &LoadOptions::default()), Err(DataError::EmptyFile)));
    }

    #[test]
    fn ragged_rows_report_one_based_row() {
        let err = parse_csv("a,b\n1,2\n3,4\n5\n", &LoadOptions::default()).unwrap_err();
        assert!(matches!(err, DataError::RaggedRow { row: 3, expected: 2, found: 1 }), "{err}");
        let err = parse_csv("a,b\n1,\n", &LoadOptions::default()).unwrap_err();
        assert!(matches!(err, DataError::RaggedRow { row: 1, .. }), "{err}");
    }

    #[test]
    fn missing_declared_columns() {
        let err = parse_csv("a,b\n1,2\n", &LoadOptions::default().with_sensitive("sex")).unwrap_err();
        assert!(matches!(err, DataError::MissingColumn(c) if c == "sex"));
    }

    #[test]
    fn duplicate_header() {
        assert!(matches!(parse_csv("a,a\n1,2\n", &LoadOptions::default()), Err(DataError::DuplicateColumn(_))));
    }
}
