use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::data::DatasetProfile;
use crate::fm::Configuration;
use crate::metrics::{FairnessReport, PerformanceReport};
use crate::selector::{AlgorithmKind, MethodQueue};

use super::PipelineError;

/// Significant digits kept for every real number in a serialized report.
pub const REPORT_SIGNIFICANT_DIGITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Decision {
    Accepted,
    RejectedQuality,
    RejectedTrigger,
    /// Accepted with a finding attached.
    Flagged,
}

impl std::fmt::Display for Decision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Decision::Accepted => "ACCEPTED",
            Decision::RejectedQuality => "REJECTED_QUALITY",
            Decision::RejectedTrigger => "REJECTED_TRIGGER",
            Decision::Flagged => "FLAGGED",
        })
    }
}

impl Decision {
    pub fn is_accepting(self) -> bool {
        matches!(self, Decision::Accepted | Decision::Flagged)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub algorithm: AlgorithmKind,
    pub performance: PerformanceReport,
    pub fairness: Option<FairnessReport>,
    pub decision: Decision,
    pub rule_trace: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Outcome {
    Accepted { algorithm: AlgorithmKind },
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionReport {
    pub profile: DatasetProfile,
    pub queue: MethodQueue,
    pub candidates: Vec<CandidateRecord>,
    pub outcome: Outcome,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub configuration: Option<Configuration>,
    pub criterion: String,
    pub train_size: usize,
    pub test_size: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub tool_version: String,
}

/// Rounds to [`REPORT_SIGNIFICANT_DIGITS`] significant digits.
pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", REPORT_SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float parses")
}

fn round_value(v: &mut serde_json::Value) {
    match v {
        serde_json::Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().expect("f64 number"));
            *v = serde_json::Number::from_f64(x).map_or(serde_json::Value::Null, serde_json::Value::Number);
        }
        serde_json::Value::Array(items) => items.iter_mut().for_each(round_value),
        serde_json::Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

impl SelectionReport {
    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        round_value(&mut v);
        let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, PipelineError> {
        serde_json::from_str(text).map_err(|e| PipelineError::InvalidReport(e.to_string()))
    }

    /// The report as it reads back from its own JSON.
    pub fn normalized(&self) -> Self {
        Self::from_json(&self.to_json()).expect("own JSON parses")
    }

    pub fn accepted(&self) -> Option<AlgorithmKind> {
        match self.outcome {
            Outcome::Accepted { algorithm } => Some(algorithm),
            Outcome::Exhausted => None,
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let p = &self.profile;
        let _ = writeln!(
            out,
            "profile: {} samples, {} features, {}, prediction {}",
            p.sample_size,
            p.feature_count,
            if p.labeled { "labeled" } else { "unlabeled" },
            p.prediction_kind
        );
        let _ = writeln!(out, "split: {} train / {} test (seed {})", self.train_size, self.test_size, self.seed);
        let _ = writeln!(out, "criterion: {}", self.criterion);
        let items: Vec<String> = self.queue.items.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "queue: {}", items.join(", "));
        for c in &self.candidates {
            let fmt = |v: Option<f64>| v.map_or("n/a".to_string(), |x| format!("{:.4}", round_significant(x)));
            let _ = write!(
                out,
                "- {}: {} f1={} bacc={} mcc={}",
                c.algorithm,
                c.decision,
                fmt(c.performance.f1),
                fmt(c.performance.balanced_accuracy),
                fmt(c.performance.mcc)
            );
            if let Some(f) = &c.fairness {
                let _ = write!(out, " eoo={} di={} abad={}", fmt(Some(f.eoo)), fmt(f.di), fmt(Some(f.abad)));
            }
            out.push('\n');
            for line in &c.rule_trace {
                let _ = writeln!(out, "    {line}");
            }
        }
        match self.outcome {
            Outcome::Accepted { algorithm } => {
                let _ = writeln!(out, "outcome: ACCEPTED {algorithm}");
            }
            Outcome::Exhausted => out.push_str("outcome: EXHAUSTED\n"),
        }
        if let Some(c) = &self.configuration {
            let _ = writeln!(out, "configuration: {c}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}
