//! Confusion matrices, performance metrics and group-fairness metrics.
//!
//! Ratios are formed from exact integer counts and divided once at the end.
//! A metric whose denominator is zero is absent rather than NaN.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::learners::PredictionSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("prediction set is empty")]
    EmptyPredictions,
    #[error("positive label '{0}' is not in the label set")]
    UnknownPositiveLabel(String),
    #[error("the {0} group has no entries")]
    EmptyGroup(&'static str),
    #[error("confusion matrix is empty")]
    EmptyMatrix,
    #[error("{0} is undefined: {1}")]
    UndefinedMetric(MetricId, &'static str),
    #[error("unknown metric '{0}'")]
    UnknownMetric(String),
}

/// Every metric the crate computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricId {
    Accuracy,
    Sensitivity,
    Specificity,
    BalancedAccuracy,
    F1,
    Mcc,
    Eoo,
    Di,
    Abad,
}

impl MetricId {
    pub const ALL: [MetricId; 9] = [
        MetricId::Accuracy,
        MetricId::Sensitivity,
        MetricId::Specificity,
        MetricId::BalancedAccuracy,
        MetricId::F1,
        MetricId::Mcc,
        MetricId::Eoo,
        MetricId::Di,
        MetricId::Abad,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MetricId::Accuracy => "accuracy",
            MetricId::Sensitivity => "sensitivity",
            MetricId::Specificity => "specificity",
            MetricId::BalancedAccuracy => "balanced_accuracy",
            MetricId::F1 => "f1",
            MetricId::Mcc => "mcc",
            MetricId::Eoo => "eoo",
            MetricId::Di => "di",
            MetricId::Abad => "abad",
        }
    }

    pub fn is_fairness(self) -> bool {
        matches!(self, MetricId::Eoo | MetricId::Di | MetricId::Abad)
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetricId {
    type Err = MetricsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let want = s.trim().to_ascii_lowercase();
        let want = match want.as_str() {
            "bacc" => "balanced_accuracy",
            other => other,
        };
        MetricId::ALL.into_iter().find(|m| m.as_str() == want).ok_or_else(|| MetricsError::UnknownMetric(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
}

impl ConfusionMatrix {
    pub fn new(tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        Self { tp, fp, fn_, tn }
    }

    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.fn_ + self.tn
    }

    /// Predicted-positive count.
    pub fn favorable(&self) -> u64 {
        self.tp + self.fp
    }

    fn add(&mut self, actual_pos: bool, predicted_pos: bool) {
        match (actual_pos, predicted_pos) {
            (true, true) => self.tp += 1,
            (false, true) => self.fp += 1,
            (true, false) => self.fn_ += 1,
            (false, false) => self.tn += 1,
        }
    }
}

impl fmt::Display for ConfusionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tp={} fp={} fn={} tn={}", self.tp, self.fp, self.fn_, self.tn)
    }
}

impl std::ops::Add for ConfusionMatrix {
    type Output = ConfusionMatrix;

    fn add(self, o: Self) -> Self {
        ConfusionMatrix::new(self.tp + o.tp, self.fp + o.fp, self.fn_ + o.fn_, self.tn + o.tn)
    }
}

/// Confusion matrices of the protected group (P) and everyone else (U).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupedConfusion {
    pub protected: ConfusionMatrix,
    pub unprotected: ConfusionMatrix,
}

impl GroupedConfusion {
    pub fn new(protected: ConfusionMatrix, unprotected: ConfusionMatrix) -> Self {
        Self { protected, unprotected }
    }

    pub fn n_protected(&self) -> u64 {
        self.protected.total()
    }

    pub fn n_unprotected(&self) -> u64 {
        self.unprotected.total()
    }

    pub fn swapped(&self) -> Self {
        Self { protected: self.unprotected, unprotected: self.protected }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PerformanceReport {
    pub accuracy: Option<f64>,
    pub sensitivity: Option<f64>,
    pub specificity: Option<f64>,
    pub balanced_accuracy: Option<f64>,
    pub f1: Option<f64>,
    pub mcc: Option<f64>,
}

impl PerformanceReport {
    /// Value of a performance metric; `None` for fairness ids.
    pub fn get(&self, metric: MetricId) -> Option<f64> {
        match metric {
            MetricId::Accuracy => self.accuracy,
            MetricId::Sensitivity => self.sensitivity,
            MetricId::Specificity => self.specificity,
            MetricId::BalancedAccuracy => self.balanced_accuracy,
            MetricId::F1 => self.f1,
            MetricId::Mcc => self.mcc,
            MetricId::Eoo | MetricId::Di | MetricId::Abad => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FairnessReport {
    pub eoo: f64,
    pub di: Option<f64>,
    pub abad: f64,
}

impl FairnessReport {
    pub fn get(&self, metric: MetricId) -> Option<f64> {
        match metric {
            MetricId::Eoo => Some(self.eoo),
            MetricId::Di => self.di,
            MetricId::Abad => Some(self.abad),
            _ => None,
        }
    }
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

fn check_positive(predictions: &PredictionSet, positive: &str) -> Result<(), MetricsError> {
    if predictions.entries.is_empty() {
        return Err(MetricsError::EmptyPredictions);
    }
    if !predictions.labels.iter().any(|l| l == positive) {
        return Err(MetricsError::UnknownPositiveLabel(positive.to_string()));
    }
    Ok(())
}

pub fn confusion(predictions: &PredictionSet, positive: &str) -> Result<ConfusionMatrix, MetricsError> {
    check_positive(predictions, positive)?;
    let mut cm = ConfusionMatrix::default();
    for e in &predictions.entries {
        cm.add(e.y_true == positive, e.y_pred == positive);
    }
    Ok(cm)
}

/// Splits entries by `group == protected_value`.
pub fn group_confusion(
    predictions: &PredictionSet,
    protected_value: &str,
    positive: &str,
) -> Result<GroupedConfusion, MetricsError> {
    check_positive(predictions, positive)?;
    let mut gc = GroupedConfusion::new(ConfusionMatrix::default(), ConfusionMatrix::default());
    for e in &predictions.entries {
        let cm = if e.group == protected_value { &mut gc.protected } else { &mut gc.unprotected };
        cm.add(e.y_true == positive, e.y_pred == positive);
    }
    if gc.n_protected() == 0 {
        return Err(MetricsError::EmptyGroup("protected"));
    }
    if gc.n_unprotected() == 0 {
        return Err(MetricsError::EmptyGroup("unprotected"));
    }
    Ok(gc)
}

pub fn performance(cm: &ConfusionMatrix) -> Result<PerformanceReport, MetricsError> {
    let n = cm.total();
    if n == 0 {
        return Err(MetricsError::EmptyMatrix);
    }
    let ConfusionMatrix { tp, fp, fn_, tn } = *cm;
    let sensitivity = ratio(tp, tp + fn_);
    let specificity = ratio(tn, tn + fp);
    // (tp/(tp+fn) + tn/(tn+fp)) / 2 over a common denominator.
    let balanced_accuracy = (sensitivity.is_some() && specificity.is_some()).then(|| {
        let num = u128::from(tp) * u128::from(tn + fp) + u128::from(tn) * u128::from(tp + fn_);
        let den = 2 * u128::from(tp + fn_) * u128::from(tn + fp);
        num as f64 / den as f64
    });
    let mcc_den = u128::from(tp + fp) * u128::from(tp + fn_) * u128::from(tn + fp) * u128::from(tn + fn_);
    let mcc = (mcc_den > 0).then(|| {
        let num = i128::from(tp) * i128::from(tn) - i128::from(fp) * i128::from(fn_);
        num as f64 / (mcc_den as f64).sqrt()
    });
    Ok(PerformanceReport {
        accuracy: ratio(tp + tn, n),
        sensitivity,
        specificity,
        balanced_accuracy,
        f1: ratio(2 * tp, 2 * tp + fp + fn_),
        mcc,
    })
}

/// Equality of opportunity: TPR of the protected group minus TPR of the
/// unprotected group. Signed.
pub fn eoo(gc: &GroupedConfusion) -> Result<f64, MetricsError> {
    let (p, u) = (&gc.protected, &gc.unprotected);
    let (dp, du) = (p.tp + p.fn_, u.tp + u.fn_);
    if dp == 0 || du == 0 {
        return Err(MetricsError::UndefinedMetric(MetricId::Eoo, "a group has no actual positives"));
    }
    let num = i128::from(p.tp) * i128::from(du) - i128::from(u.tp) * i128::from(dp);
    Ok(num as f64 / (u128::from(dp) * u128::from(du)) as f64)
}

/// Disparate impact: favorable-outcome rate of the protected group over that
/// of the unprotected group.
pub fn di(gc: &GroupedConfusion) -> Result<f64, MetricsError> {
    let (p, u) = (&gc.protected, &gc.unprotected);
    if p.total() == 0 || u.total() == 0 {
        return Err(MetricsError::UndefinedMetric(MetricId::Di, "a group is empty"));
    }
    if u.favorable() == 0 {
        return Err(MetricsError::UndefinedMetric(MetricId::Di, "unprotected group has no favorable outcomes"));
    }
    let num = u128::from(p.favorable()) * u128::from(u.total());
    let den = u128::from(u.favorable()) * u128::from(p.total());
    Ok(num as f64 / den as f64)
}

/// `½(tp_P + tn_P) − (tp_U + tn_U)`, count-based and signed.
pub fn abad(gc: &GroupedConfusion) -> f64 {
    let (p, u) = (&gc.protected, &gc.unprotected);
    let twice = i128::from(p.tp + p.tn) - 2 * i128::from(u.tp + u.tn);
    twice as f64 / 2.0
}

/// All three fairness metrics; fails only when EOO is undefined.
pub fn fairness(gc: &GroupedConfusion) -> Result<FairnessReport, MetricsError> {
    Ok(FairnessReport { eoo: eoo(gc)?, di: di(gc).ok(), abad: abad(gc) })
}
