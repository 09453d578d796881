//! Orchestration: profile, recommend, train and evaluate candidates in
//! queue order, audit fairness, apply triggers and report.

mod report;
mod rules;
mod settings;

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{profile, stratified_split, DataError, ProfileOptions, TabularDataset};
use crate::dsl::bundled;
use crate::fm::{to_dot, FmError};
use crate::learners::{
    import_predictions, prediction_set, train, ImportOptions, LearnerError, LearnerSpec, PredictionsError,
};
use crate::metrics::{
    abad, confusion, di, eoo, group_confusion, performance, ConfusionMatrix, FairnessReport, GroupedConfusion,
    MetricId, MetricsError, PerformanceReport,
};
use crate::selector::{recommend, ConfigurationMapper, SelectorError};

pub use report::{round_significant, CandidateRecord, Decision, Outcome, SelectionReport, REPORT_SIGNIFICANT_DIGITS};
pub use rules::{
    apply_triggers, evaluate_criterion, parse_triggers, Comparator, Condition, QualityCriterion, Relation,
    TriggerAction, TriggerRule,
};
pub use settings::{Settings, DEFAULT_SETTINGS_TOML};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("unknown metric '{0}'")]
    UnknownMetric(String),
    #[error("invalid criterion: {0}")]
    InvalidCriterion(String),
    #[error("invalid trigger: {0}")]
    InvalidTrigger(String),
    #[error("invalid settings: {0}")]
    InvalidSettings(String),
    #[error("invalid report: {0}")]
    InvalidReport(String),
    #[error("report has no accepted candidate")]
    NotAccepted,
    #[error("fairness needs a protected value for sensitive column '{0}'")]
    MissingProtectedValue(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Learner(#[from] LearnerError),
    #[error(transparent)]
    Predictions(#[from] PredictionsError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Selector(#[from] SelectorError),
    #[error(transparent)]
    Fm(#[from] FmError),
}

impl PipelineError {
    /// Whether the error stems from user input rather than a defect.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, PipelineError::Fm(_) | PipelineError::Learner(LearnerError::Malformed(_)))
    }
}

struct Evaluation {
    performance: PerformanceReport,
    fairness: Option<FairnessReport>,
    trace: Vec<String>,
}

fn evaluate(
    spec: &LearnerSpec,
    train_set: &TabularDataset,
    test_set: &TabularDataset,
    positive: &str,
    protected: Option<&str>,
) -> Result<Evaluation, PipelineError> {
    let model = train(spec, train_set)?;
    let preds = prediction_set(&model, test_set)?;
    let cm = confusion(&preds, positive)?;
    let mut trace = vec![format!("confusion {cm}")];
    let performance = performance(&cm)?;
    let fairness = match protected {
        None => None,
        Some(value) => match group_confusion(&preds, value, positive).and_then(|gc| {
            trace.push(format!("protected {}; unprotected {}", gc.protected, gc.unprotected));
            Ok(FairnessReport { eoo: eoo(&gc)?, di: di(&gc).ok(), abad: abad(&gc) })
        }) {
            Ok(f) => Some(f),
            Err(e) => {
                trace.push(format!("fairness not computed: {e}"));
                None
            }
        },
    };
    Ok(Evaluation { performance, fairness, trace })
}

/// Runs the whole selection on a labeled binary dataset. Deterministic for
/// fixed settings; the returned report equals its own JSON round trip.
pub fn run_pipeline(dataset: &TabularDataset, settings: &Settings) -> Result<SelectionReport, PipelineError> {
    let classes = dataset.class_counts()?;
    if classes.len() > 2 {
        return Err(DataError::NonBinaryTarget(classes.len()).into());
    }
    let protected = match (&dataset.sensitive, &settings.protected_value) {
        (Some(_), Some(v)) => Some(v.as_str()),
        (Some(col), None) => return Err(PipelineError::MissingProtectedValue(col.clone())),
        (None, _) => None,
    };
    let options = ProfileOptions {
        prediction_kind: settings.prediction_kind,
        positive_label: settings.positive_label.clone(),
        known_category_count: None,
    };
    let profile = profile(dataset, &options, &settings.thresholds)?;
    let positive =
        settings.positive_label.clone().unwrap_or_else(|| classes.last().map(|c| c.0.clone()).unwrap_or_default());
    let (train_set, test_set) = stratified_split(dataset, settings.test_fraction, settings.seed)?;
    let queue = recommend(&profile, &settings.thresholds);

    let mut notes = Vec::new();
    let mut candidates = Vec::new();
    let mut outcome = Outcome::Exhausted;
    for item in queue.items.iter().copied() {
        if item.is_terminal() {
            notes.push(format!("queue reached {item}"));
            break;
        }
        if !item.is_trainable() {
            notes.push(format!("{item} skipped: no in-house trainer"));
            continue;
        }
        let spec = LearnerSpec::new(item, settings.seed);
        let record = match evaluate(&spec, &train_set, &test_set, &positive, protected) {
            Err(e) => CandidateRecord {
                algorithm: item,
                performance: PerformanceReport::default(),
                fairness: None,
                decision: Decision::RejectedQuality,
                rule_trace: vec![format!("training failed: {e}")],
            },
            Ok(mut ev) => {
                let passed = evaluate_criterion(&ev.performance, &settings.criterion);
                let value = ev.performance.get(settings.criterion.metric);
                let shown = value.map_or("absent".to_string(), |v| round_significant(v).to_string());
                ev.trace.push(format!(
                    "criterion {}: {} = {shown} → {}",
                    settings.criterion,
                    settings.criterion.metric,
                    if passed { "pass" } else { "fail" }
                ));
                let decision = if passed {
                    let (action, trace) = apply_triggers(&ev.performance, ev.fairness.as_ref(), &settings.triggers);
                    ev.trace.extend(trace);
                    match action {
                        TriggerAction::Accept => Decision::Accepted,
                        TriggerAction::Flag => Decision::Flagged,
                        TriggerAction::AdvanceQueue => Decision::RejectedTrigger,
                    }
                } else {
                    Decision::RejectedQuality
                };
                CandidateRecord {
                    algorithm: item,
                    performance: ev.performance,
                    fairness: ev.fairness,
                    decision,
                    rule_trace: ev.trace,
                }
            }
        };
        let accepted = record.decision.is_accepting();
        candidates.push(record);
        if accepted {
            outcome = Outcome::Accepted { algorithm: item };
            break;
        }
    }

    let configuration = match outcome {
        Outcome::Exhausted => None,
        Outcome::Accepted { algorithm } => {
            let mut metrics = vec![settings.criterion.metric];
            if candidates.last().is_some_and(|c| c.fairness.is_some()) {
                metrics.extend([MetricId::Eoo, MetricId::Di, MetricId::Abad]);
            }
            match ConfigurationMapper::new(settings.thresholds).to_configuration(algorithm, &profile, &metrics) {
                Ok(c) => Some(c),
                Err(e) => {
                    notes.push(format!("no configuration: {e}"));
                    None
                }
            }
        }
    };

    let report = SelectionReport {
        profile,
        queue,
        candidates,
        outcome,
        seed: settings.seed,
        configuration,
        criterion: settings.criterion.to_string(),
        train_size: train_set.len(),
        test_size: test_set.len(),
        notes,
        tool_version: crate::TOOL_VERSION.to_string(),
    };
    Ok(report.normalized())
}

/// Metrics of an externally produced predictions file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub confusion: ConfusionMatrix,
    pub grouped: GroupedConfusion,
    pub performance: PerformanceReport,
    pub fairness: FairnessReport,
}

/// Audits a predictions file already in memory.
pub fn audit_set(
    predictions: &crate::learners::PredictionSet,
    protected_value: &str,
    positive_label: &str,
) -> Result<AuditReport, PipelineError> {
    let grouped = group_confusion(predictions, protected_value, positive_label)?;
    let confusion = confusion(predictions, positive_label)?;
    Ok(AuditReport {
        confusion,
        grouped,
        performance: performance(&confusion)?,
        fairness: FairnessReport { eoo: eoo(&grouped)?, di: di(&grouped).ok(), abad: abad(&grouped) },
    })
}

pub fn audit(
    predictions_path: &Path,
    protected_value: &str,
    positive_label: &str,
    group_column: Option<&str>,
) -> Result<AuditReport, PipelineError> {
    let options = ImportOptions {
        group_column: group_column.map(String::from),
        positive_label: Some(positive_label.to_string()),
    };
    audit_set(&import_predictions(predictions_path, &options)?, protected_value, positive_label)
}

/// Graphviz text of the selection model with the accepted configuration
/// highlighted.
pub fn render_instance(report: &SelectionReport) -> Result<String, PipelineError> {
    let config =
        report.configuration.as_ref().filter(|_| report.accepted().is_some()).ok_or(PipelineError::NotAccepted)?;
    Ok(to_dot(&bundled::selection_model(), Some(config))?)
}
