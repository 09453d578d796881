use serde::{Deserialize, Serialize};

use crate::data::PredictionKind;
use crate::selector::SelectorThresholds;

use super::{PipelineError, QualityCriterion, TriggerRule};

/// The bundled scenario settings.
pub const DEFAULT_SETTINGS_TOML: &str = include_str!("default_settings.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    /// Column splitting rows into protected and unprotected groups.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sensitive: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub protected_value: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positive_label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prediction_kind: Option<PredictionKind>,
    pub criterion: QualityCriterion,
    #[serde(default, rename = "trigger")]
    pub triggers: Vec<TriggerRule>,
    #[serde(default)]
    pub thresholds: SelectorThresholds,
    pub seed: u64,
    pub test_fraction: f64,
}

impl Settings {
    pub fn from_toml(text: &str) -> Result<Self, PipelineError> {
        let s: Settings = toml::from_str(text).map_err(|e| PipelineError::InvalidSettings(e.to_string()))?;
        s.thresholds.validate()?;
        if !(s.test_fraction > 0.0 && s.test_fraction < 1.0) {
            return Err(PipelineError::InvalidSettings(format!("test_fraction {} not in (0, 1)", s.test_fraction)));
        }
        Ok(s)
    }
}

impl Default for Settings {
    fn default() -> Self {
        Settings::from_toml(DEFAULT_SETTINGS_TOML).expect("bundled settings parse")
    }
}
