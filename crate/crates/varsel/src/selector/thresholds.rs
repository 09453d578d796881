use serde::{Deserialize, Serialize};

use super::SelectorError;

/// Numeric cut points of the selection heuristics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelectorThresholds {
    /// Below this many samples the only advice is to get more data.
    pub min_samples: usize,
    /// At or above this many samples the large-data estimators apply.
    pub large_dataset: usize,
    /// Sample count separating small from large clustering and embedding
    /// problems.
    pub clustering_large: usize,
    /// Datasets with fewer features than this are "few-feature" datasets.
    pub few_features: usize,
}

impl Default for SelectorThresholds {
    fn default() -> Self {
        Self { min_samples: 50, large_dataset: 100_000, clustering_large: 10_000, few_features: 30 }
    }
}

impl SelectorThresholds {
    pub fn validate(&self) -> Result<(), SelectorError> {
        let ok = self.min_samples > 0
            && self.few_features > 0
            && self.min_samples < self.clustering_large
            && self.clustering_large < self.large_dataset;
        if ok {
            Ok(())
        } else {
            Err(SelectorError::InvalidThresholds(format!(
                "need 0 < min_samples ({}) < clustering_large ({}) < large_dataset ({}) and few_features ({}) > 0",
                self.min_samples, self.clustering_large, self.large_dataset, self.few_features
            )))
        }
    }

    /// Parses a TOML table; absent keys keep their defaults.
    pub fn from_toml(text: &str) -> Result<Self, SelectorError> {
        let t: SelectorThresholds =
            toml::from_str(text).map_err(|e| SelectorError::InvalidThresholds(e.to_string()))?;
        t.validate()?;
        Ok(t)
    }
}
