//! Rule-based algorithm selection: a dataset profile becomes a FIFO queue
//! of candidates, and each candidate maps to a configuration of the
//! bundled selection model.

mod algorithm;
mod mapping;
mod rules;
mod thresholds;

use thiserror::Error;

use crate::fm::ConfigViolation;

pub use algorithm::AlgorithmKind;
pub use mapping::{metric_leaf, ConfigurationMapper};
pub use rules::{explain, recommend, MethodQueue};
pub use thresholds::SelectorThresholds;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SelectorError {
    #[error("invalid thresholds: {0}")]
    InvalidThresholds(String),
    #[error("unknown metric '{0}'")]
    UnknownMetric(String),
    #[error("no feature-model leaf for {0}")]
    UnmappedAlgorithm(AlgorithmKind),
    #[error("{0} is a placeholder, not an algorithm")]
    TerminalPlaceholder(AlgorithmKind),
    #[error("profile has no prediction kind")]
    NoPredictionKind,
    #[error("mapped configuration is invalid: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    InvalidConfiguration(Vec<ConfigViolation>),
}
