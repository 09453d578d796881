//! Deterministic binary classifiers for the classification branch of the
//! selection heuristics, plus import and export of prediction files.
//!
//! Every learner works on encoded rows: numeric columns standardized with
//! training statistics, categorical columns one-hot encoded and, for naive
//! Bayes only, text columns as bag-of-words counts. Labels are the two
//! training classes in declared order; index 1 is the positive side of
//! every decision function.

mod bayes;
mod encode;
mod forest;
mod kernel;
mod knn;
mod linear;
mod predictions;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{DataError, TabularDataset};
use crate::rng::SplitMix64;
use crate::selector::AlgorithmKind;

pub use bayes::GaussianNb;
pub use encode::Encoder;
pub use forest::{best_split, Forest, Node, Tree, TreeParams};
pub use kernel::KernelSvm;
pub use knn::Knn;
pub use linear::Linear;
pub use predictions::{
    import_predictions, parse_predictions, write_predictions, ImportOptions, PredictionEntry, PredictionSet,
    PredictionsError, PREDICTIONS_HEADER,
};

/// Version of the serialized [`TrainedModel`] layout.
pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum LearnerError {
    #[error("{0} cannot be trained here")]
    UnsupportedKind(AlgorithmKind),
    #[error("text column '{0}' is only supported by NAIVE_BAYES")]
    TextFeaturesUnsupported(String),
    #[error("training set has a single class")]
    SingleClassTrainingSet,
    #[error("training target has {0} classes; binary classification only")]
    NonBinaryTarget(usize),
    #[error("row has {found} feature cells, model expects {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("column '{column}': '{value}' is not a number")]
    BadValue { column: String, value: String },
    #[error("column '{0}' not found")]
    MissingColumn(String),
    #[error("unknown hyperparameter '{name}' for {kind}")]
    UnknownHyperparameter { kind: AlgorithmKind, name: String },
    #[error("hyperparameter '{name}' = {value} is out of range")]
    InvalidHyperparameter { name: String, value: f64 },
    #[error("unsupported model format version {0}")]
    FormatVersion(u32),
    #[error("malformed model: {0}")]
    Malformed(String),
    #[error(transparent)]
    Data(#[from] DataError),
}

/// Default hyperparameters of a trainable kind.
pub fn default_hyperparameters(kind: AlgorithmKind) -> Option<BTreeMap<String, f64>> {
    let pairs: &[(&str, f64)] = match kind {
        AlgorithmKind::LinearSvc => &[("lambda", 0.01), ("epochs", 200.0), ("balanced", 1.0)],
        AlgorithmKind::Knn => &[("k", 5.0)],
        // gamma 0 means 1 / encoded width.
        AlgorithmKind::RbfSvc => &[("lambda", 0.01), ("gamma", 0.0), ("epochs", 30.0), ("balanced", 1.0)],
        AlgorithmKind::Ensemble => {
            &[("n_trees", 100.0), ("max_depth", 8.0), ("bootstrap", 1.0), ("min_samples_split", 2.0)]
        }
        AlgorithmKind::SgdClassifier => &[("alpha", 1e-4), ("eta0", 0.01), ("epochs", 50.0), ("balanced", 1.0)],
        AlgorithmKind::NaiveBayes => &[("var_smoothing", 1e-9)],
        _ => return None,
    };
    Some(pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnerSpec {
    pub kind: AlgorithmKind,
    /// Overrides of [`default_hyperparameters`].
    pub hyperparameters: BTreeMap<String, f64>,
    pub seed: u64,
}

impl LearnerSpec {
    pub fn new(kind: AlgorithmKind, seed: u64) -> Self {
        Self { kind, hyperparameters: BTreeMap::new(), seed }
    }

    pub fn with(mut self, name: &str, value: f64) -> Self {
        self.hyperparameters.insert(name.to_string(), value);
        self
    }

    /// Defaults merged with the overrides.
    pub fn resolved(&self) -> Result<BTreeMap<String, f64>, LearnerError> {
        let mut hp = default_hyperparameters(self.kind).ok_or(LearnerError::UnsupportedKind(self.kind))?;
        for (name, &value) in &self.hyperparameters {
            match hp.get_mut(name) {
                Some(slot) if value.is_finite() && value >= 0.0 => *slot = value,
                Some(_) => return Err(LearnerError::InvalidHyperparameter { name: name.clone(), value }),
                None => return Err(LearnerError::UnknownHyperparameter { kind: self.kind, name: name.clone() }),
            }
        }
        Ok(hp)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", rename_all = "snake_case")]
pub enum Parameters {
    Linear(Linear),
    Knn(Knn),
    Kernel(KernelSvm),
    Forest(Forest),
    Bayes(GaussianNb),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub format_version: u32,
    pub kind: AlgorithmKind,
    pub hyperparameters: BTreeMap<String, f64>,
    /// The two class labels; index 1 is the positive side.
    pub labels: Vec<String>,
    pub encoder: Encoder,
    pub parameters: Parameters,
}

impl TrainedModel {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, LearnerError> {
        let version: serde_json::Value =
            serde_json::from_str(text).map_err(|e| LearnerError::Malformed(e.to_string()))?;
        match version.get("format_version").and_then(serde_json::Value::as_u64) {
            Some(v) if v == u64::from(MODEL_FORMAT_VERSION) => {}
            Some(v) => return Err(LearnerError::FormatVersion(v as u32)),
            None => return Err(LearnerError::Malformed("missing format_version".into())),
        }
        serde_json::from_value(version).map_err(|e| LearnerError::Malformed(e.to_string()))
    }

    fn predict_index(&self, x: &[f64]) -> usize {
        match &self.parameters {
            Parameters::Linear(m) => m.predict(x),
            Parameters::Knn(m) => m.predict(x),
            Parameters::Kernel(m) => m.predict(x),
            Parameters::Forest(m) => m.predict(x),
            Parameters::Bayes(m) => m.predict(x),
        }
    }
}

fn count(hp: &BTreeMap<String, f64>, name: &str) -> Result<usize, LearnerError> {
    let v = hp[name];
    if v.fract() != 0.0 || v < 1.0 {
        return Err(LearnerError::InvalidHyperparameter { name: name.to_string(), value: v });
    }
    Ok(v as usize)
}

fn positive(hp: &BTreeMap<String, f64>, name: &str) -> Result<f64, LearnerError> {
    let v = hp[name];
    if v <= 0.0 {
        return Err(LearnerError::InvalidHyperparameter { name: name.to_string(), value: v });
    }
    Ok(v)
}

/// Trains a binary classifier on every non-target column of `train_set`.
pub fn train(spec: &LearnerSpec, train_set: &TabularDataset) -> Result<TrainedModel, LearnerError> {
    let hp = spec.resolved()?;
    let classes = train_set.class_counts()?;
    match classes.len() {
        0 | 1 => return Err(LearnerError::SingleClassTrainingSet),
        2 => {}
        n => return Err(LearnerError::NonBinaryTarget(n)),
    }
    let labels: Vec<String> = classes.into_iter().map(|c| c.0).collect();
    let encoder = Encoder::fit(train_set, spec.kind == AlgorithmKind::NaiveBayes)?;
    let x: Vec<Vec<f64>> =
        encoder.raw_rows(train_set)?.iter().map(|r| encoder.encode_row(r)).collect::<Result<_, _>>()?;
    let t = train_set.target_index().expect("class_counts checked the target");
    let y: Vec<usize> = train_set.rows.iter().map(|r| usize::from(r[t] == labels[1])).collect();
    let mut rng = SplitMix64::new(spec.seed);

    let parameters = match spec.kind {
        AlgorithmKind::LinearSvc => Parameters::Linear(Linear::fit_svm(
            &x,
            &y,
            positive(&hp, "lambda")?,
            count(&hp, "epochs")?,
            hp["balanced"] != 0.0,
        )),
        AlgorithmKind::Knn => Parameters::Knn(Knn { k: count(&hp, "k")?, points: x, labels: y }),
        AlgorithmKind::RbfSvc => {
            let gamma = if hp["gamma"] > 0.0 { hp["gamma"] } else { 1.0 / encoder.width().max(1) as f64 };
            Parameters::Kernel(KernelSvm::fit(
                &x,
                &y,
                positive(&hp, "lambda")?,
                gamma,
                count(&hp, "epochs")?,
                hp["balanced"] != 0.0,
                &mut rng,
            ))
        }
        AlgorithmKind::Ensemble => {
            let params =
                TreeParams { max_depth: count(&hp, "max_depth")?, min_samples_split: count(&hp, "min_samples_split")? };
            Parameters::Forest(Forest::fit(&x, &y, count(&hp, "n_trees")?, hp["bootstrap"] != 0.0, params, &mut rng))
        }
        AlgorithmKind::SgdClassifier => Parameters::Linear(Linear::fit_logistic(
            &x,
            &y,
            hp["alpha"],
            positive(&hp, "eta0")?,
            count(&hp, "epochs")?,
            hp["balanced"] != 0.0,
            &mut rng,
        )),
        AlgorithmKind::NaiveBayes => Parameters::Bayes(GaussianNb::fit(&x, &y, hp["var_smoothing"])),
        other => return Err(LearnerError::UnsupportedKind(other)),
    };

    Ok(TrainedModel {
        format_version: MODEL_FORMAT_VERSION,
        kind: spec.kind,
        hyperparameters: hp,
        labels,
        encoder,
        parameters,
    })
}

/// Labels for raw feature rows given in the model's column order
/// (`model.encoder.columns`).
pub fn predict(model: &TrainedModel, rows: &[Vec<String>]) -> Result<Vec<String>, LearnerError> {
    rows.iter().map(|r| Ok(model.labels[model.predict_index(&model.encoder.encode_row(r)?)].clone())).collect()
}

/// Labels for every row of `ds`, matching feature columns by name.
pub fn predict_dataset(model: &TrainedModel, ds: &TabularDataset) -> Result<Vec<String>, LearnerError> {
    predict(model, &model.encoder.raw_rows(ds)?)
}

/// Pairs predictions on a labeled dataset with truth and group membership.
/// Rows are grouped by the dataset's sensitive column; without one every
/// group is empty text.
pub fn prediction_set(model: &TrainedModel, ds: &TabularDataset) -> Result<PredictionSet, LearnerError> {
    let predicted = predict_dataset(model, ds)?;
    let t = ds.target_index().ok_or(DataError::Unlabeled)?;
    let s = ds.sensitive_index();
    let mut labels = model.labels.clone();
    let entries = ds
        .rows
        .iter()
        .zip(&ds.row_ids)
        .zip(predicted)
        .map(|((row, &row_id), y_pred)| {
            if !labels.contains(&row[t]) {
                labels.push(row[t].clone());
            }
            PredictionEntry {
                row_id,
                y_true: row[t].clone(),
                y_pred,
                group: s.map(|i| row[i].clone()).unwrap_or_default(),
            }
        })
        .collect();
    PredictionSet::new(entries, labels).map_err(|e| LearnerError::Malformed(e.to_string()))
}
