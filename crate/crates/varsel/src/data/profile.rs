use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::selector::SelectorThresholds;

use super::{ColumnKind, DataError, TabularDataset};

/// What the caller wants to predict. Not inferable from data alone in
/// general, so it can be supplied as a hint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PredictionKind {
    Category,
    Quantity,
    JustLooking,
    None,
}

impl fmt::Display for PredictionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PredictionKind::Category => "CATEGORY",
            PredictionKind::Quantity => "QUANTITY",
            PredictionKind::JustLooking => "JUST_LOOKING",
            PredictionKind::None => "NONE",
        })
    }
}

impl FromStr for PredictionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "CATEGORY" => Ok(PredictionKind::Category),
            "QUANTITY" => Ok(PredictionKind::Quantity),
            "JUST_LOOKING" => Ok(PredictionKind::JustLooking),
            "NONE" => Ok(PredictionKind::None),
            other => Err(format!("unknown prediction kind '{other}'")),
        }
    }
}

/// Selection-relevant attributes of a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetProfile {
    pub sample_size: usize,
    /// Column count minus the target.
    pub feature_count: usize,
    pub labeled: bool,
    pub prediction_kind: PredictionKind,
    pub text_data: bool,
    pub few_features: bool,
    /// Share of the positive label; only for binary targets.
    pub positive_fraction: Option<f64>,
    pub known_category_count: Option<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct ProfileOptions {
    pub prediction_kind: Option<PredictionKind>,
    /// Positive class for `positive_fraction`. Defaults to the last label in
    /// declared order.
    pub positive_label: Option<String>,
    /// Category count for unlabeled data whose number of clusters is known.
    pub known_category_count: Option<usize>,
}

/// Integer-coded numeric targets with at most this many levels count as
/// categorical when no prediction kind is given.
const MAX_CODED_LEVELS: usize = 10;

pub fn profile(
    dataset: &TabularDataset,
    options: &ProfileOptions,
    thresholds: &SelectorThresholds,
) -> Result<DatasetProfile, DataError> {
    let labeled = dataset.target.is_some();
    let feature_count = dataset.columns.len() - usize::from(labeled);
    let text_data = dataset
        .columns
        .iter()
        .enumerate()
        .any(|(i, c)| c.kind == ColumnKind::Text && Some(i) != dataset.target_index());

    let classes = if labeled { Some(dataset.class_counts()?) } else { None };
    let prediction_kind = match (options.prediction_kind, &classes) {
        (Some(k), _) => k,
        (None, None) => PredictionKind::None,
        (None, Some(classes)) => {
            let t = dataset.target_index().expect("labeled");
            let categorical = match dataset.columns[t].kind {
                ColumnKind::Numeric => {
                    classes.len() <= MAX_CODED_LEVELS
                        && classes.iter().all(|(l, _)| l.parse::<f64>().is_ok_and(|x| x.fract() == 0.0))
                }
                _ => true,
            };
            if categorical {
                PredictionKind::Category
            } else {
                PredictionKind::Quantity
            }
        }
    };

    let mut positive_fraction = None;
    let mut known_category_count = options.known_category_count;
    if let (Some(classes), PredictionKind::Category) = (&classes, prediction_kind) {
        known_category_count = Some(classes.len());
        if options.positive_label.is_some() && classes.len() > 2 {
            return Err(DataError::NonBinaryTarget(classes.len()));
        }
        if classes.len() <= 2 {
            let positive = match &options.positive_label {
                Some(p) => p.clone(),
                None => classes.last().map(|c| c.0.clone()).unwrap_or_default(),
            };
            let hits = match classes.iter().find(|(l, _)| *l == positive) {
                Some((_, n)) => *n,
                None if options.positive_label.is_some() => return Err(DataError::UnknownLabel(positive)),
                None => 0,
            };
            positive_fraction = (!dataset.is_empty()).then(|| hits as f64 / dataset.len() as f64);
        }
    }

    Ok(DatasetProfile {
        sample_size: dataset.len(),
        feature_count,
        labeled,
        prediction_kind,
        text_data,
        few_features: feature_count < thresholds.few_features,
        positive_fraction,
        known_category_count,
    })
}
