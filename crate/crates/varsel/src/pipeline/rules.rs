use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::metrics::{FairnessReport, MetricId, PerformanceReport};

use super::report::round_significant;

use super::PipelineError;

/// `≥` or `≤`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparator {
    AtLeast,
    AtMost,
}

/// "Works" test on one performance metric, e.g. `f1 >= 0.77`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QualityCriterion {
    pub metric: MetricId,
    pub comparator: Comparator,
    pub threshold: f64,
}

impl QualityCriterion {
    pub fn new(metric: MetricId, comparator: Comparator, threshold: f64) -> Result<Self, PipelineError> {
        if metric.is_fairness() {
            return Err(PipelineError::InvalidCriterion(format!("{metric} is not a performance metric")));
        }
        if !threshold.is_finite() {
            return Err(PipelineError::InvalidCriterion(format!("threshold {threshold} is not finite")));
        }
        Ok(Self { metric, comparator, threshold })
    }
}

impl fmt::Display for QualityCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.comparator {
            Comparator::AtLeast => ">=",
            Comparator::AtMost => "<=",
        };
        write!(f, "{} {op} {}", self.metric, self.threshold)
    }
}

fn parse_metric(text: &str) -> Result<MetricId, PipelineError> {
    text.parse().map_err(|_| PipelineError::UnknownMetric(text.trim().to_string()))
}

fn parse_number(text: &str) -> Result<f64, String> {
    text.trim()
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| format!("'{}' is not a number", text.trim()))
}

/// Splits `lhs OP rhs` at the first operator among `ops` (longest first).
fn split_comparison<'a>(text: &'a str, ops: &[&'a str]) -> Option<(&'a str, &'a str, &'a str)> {
    ops.iter()
        .filter_map(|op| text.find(op).map(|i| (i, *op)))
        .min_by_key(|&(i, op)| (i, usize::MAX - op.len()))
        .map(|(i, op)| (&text[..i], op, &text[i + op.len()..]))
}

impl FromStr for QualityCriterion {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: String| PipelineError::InvalidCriterion(format!("'{s}': {m}"));
        let (lhs, op, rhs) = split_comparison(s, &[">=", "<=", "≥", "≤"])
            .ok_or_else(|| bad("expected METRIC >= VALUE or METRIC <= VALUE".into()))?;
        let comparator = if op == ">=" || op == "≥" { Comparator::AtLeast } else { Comparator::AtMost };
        let metric = parse_metric(lhs)?;
        QualityCriterion::new(metric, comparator, parse_number(rhs).map_err(bad)?)
    }
}

impl Serialize for QualityCriterion {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QualityCriterion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// True iff the metric is present and passes the comparison.
pub fn evaluate_criterion(report: &PerformanceReport, criterion: &QualityCriterion) -> bool {
    match report.get(criterion.metric) {
        Some(v) => match criterion.comparator {
            Comparator::AtLeast => v >= criterion.threshold,
            Comparator::AtMost => v <= criterion.threshold,
        },
        None => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TriggerAction {
    AdvanceQueue,
    Flag,
    Accept,
}

impl fmt::Display for TriggerAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriggerAction::AdvanceQueue => "ADVANCE_QUEUE",
            TriggerAction::Flag => "FLAG",
            TriggerAction::Accept => "ACCEPT",
        })
    }
}

impl FromStr for TriggerAction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "ADVANCE_QUEUE" => Ok(TriggerAction::AdvanceQueue),
            "FLAG" => Ok(TriggerAction::Flag),
            "ACCEPT" => Ok(TriggerAction::Accept),
            other => Err(format!("unknown action '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Gt,
    Ge,
    Lt,
    Le,
}

impl Relation {
    fn as_str(self) -> &'static str {
        match self {
            Relation::Gt => ">",
            Relation::Ge => ">=",
            Relation::Lt => "<",
            Relation::Le => "<=",
        }
    }

    fn holds(self, a: f64, b: f64) -> bool {
        match self {
            Relation::Gt => a > b,
            Relation::Ge => a >= b,
            Relation::Lt => a < b,
            Relation::Le => a <= b,
        }
    }
}

/// `metric OP value`, or `|metric| OP value` on the magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Condition {
    pub metric: MetricId,
    pub magnitude: bool,
    pub relation: Relation,
    pub value: f64,
}

impl Condition {
    fn field(&self, performance: &PerformanceReport, fairness: Option<&FairnessReport>) -> Option<f64> {
        let v = if self.metric.is_fairness() { fairness?.get(self.metric) } else { performance.get(self.metric) }?;
        Some(if self.magnitude { v.abs() } else { v })
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.magnitude {
            write!(f, "|{}| {} {}", self.metric, self.relation.as_str(), self.value)
        } else {
            write!(f, "{} {} {}", self.metric, self.relation.as_str(), self.value)
        }
    }
}

impl FromStr for Condition {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: String| PipelineError::InvalidTrigger(format!("'{s}': {m}"));
        let (lhs, op, rhs) = split_comparison(s, &[">=", "<=", "≥", "≤", ">", "<"])
            .ok_or_else(|| bad("expected METRIC OP VALUE".into()))?;
        let relation = match op {
            ">" => Relation::Gt,
            ">=" | "≥" => Relation::Ge,
            "<" => Relation::Lt,
            _ => Relation::Le,
        };
        let lhs = lhs.trim();
        let (name, magnitude) = match lhs.strip_prefix('|').and_then(|l| l.strip_suffix('|')) {
            Some(inner) => (inner, true),
            None => (lhs, false),
        };
        Ok(Condition { metric: parse_metric(name)?, magnitude, relation, value: parse_number(rhs).map_err(bad)? })
    }
}

/// `CONDITION -> ACTION`, tried in ascending `order`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriggerRule {
    pub condition: Condition,
    pub action: TriggerAction,
    pub order: i64,
}

impl TriggerRule {
    pub fn parse(text: &str, order: i64) -> Result<Self, PipelineError> {
        let (cond, action) = text
            .split_once("->")
            .or_else(|| text.split_once('→'))
            .ok_or_else(|| PipelineError::InvalidTrigger(format!("'{text}': expected CONDITION -> ACTION")))?;
        let action = action.parse().map_err(|e| PipelineError::InvalidTrigger(format!("'{text}': {e}")))?;
        Ok(TriggerRule { condition: cond.parse()?, action, order })
    }
}

impl fmt::Display for TriggerRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.condition, self.action)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRule {
    rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order: Option<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTriggers {
    #[serde(default)]
    trigger: Vec<RawRule>,
}

/// Parses a triggers file:
///
/// ```toml
/// [[trigger]]
/// rule = "eoo > 0.2 -> ADVANCE_QUEUE"
/// order = 1   # optional, defaults to the position in the file
/// ```
pub fn parse_triggers(text: &str) -> Result<Vec<TriggerRule>, PipelineError> {
    let raw: RawTriggers = toml::from_str(text).map_err(|e| PipelineError::InvalidTrigger(e.to_string()))?;
    raw.trigger.iter().enumerate().map(|(i, r)| TriggerRule::parse(&r.rule, r.order.unwrap_or(i as i64 + 1))).collect()
}

impl Serialize for TriggerRule {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RawRule { rule: self.to_string(), order: Some(self.order) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TriggerRule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawRule::deserialize(d)?;
        TriggerRule::parse(&raw.rule, raw.order.unwrap_or(1)).map_err(serde::de::Error::custom)
    }
}

/// Runs the rules in ascending order (stable for equal orders). The first
/// rule whose condition holds decides; rules over an absent field are
/// skipped. No match accepts. Every evaluation is traced.
pub fn apply_triggers(
    performance: &PerformanceReport,
    fairness: Option<&FairnessReport>,
    rules: &[TriggerRule],
) -> (TriggerAction, Vec<String>) {
    let mut sorted: Vec<&TriggerRule> = rules.iter().collect();
    sorted.sort_by_key(|r| r.order);
    let mut trace = Vec::new();
    for rule in sorted {
        match rule.condition.field(performance, fairness) {
            None => trace.push(format!("trigger [{rule}] skipped: {} absent", rule.condition.metric)),
            Some(v) if rule.condition.relation.holds(v, rule.condition.value) => {
                let v = round_significant(v);
                trace.push(format!("trigger [{rule}] fired ({} = {v})", rule.condition.metric));
                return (rule.action, trace);
            }
            Some(v) => {
                trace.push(format!("trigger [{rule}] not met ({} = {})", rule.condition.metric, round_significant(v)))
            }
        }
    }
    trace.push("no trigger fired → ACCEPT".into());
    (TriggerAction::Accept, trace)
}
