//! Feature models: a feature tree with OR/ALTERNATIVE groups and
//! propositional cross-tree constraints, plus configuration checking,
//! exhaustive enumeration and Graphviz rendering.

mod dot;
mod enumerate;
mod expr;
mod model;
mod validate;

use thiserror::Error;

pub use dot::to_dot;
pub use enumerate::{enumerate_configurations, DEFAULT_ENUMERATION_CAP};
pub use expr::Expr;
pub use model::{Configuration, Constraint, Feature, FeatureModel, Group, GroupKind, Variability};
pub use validate::{
    validate_configuration, validate_model, ConfigValidity, ConfigViolation, ModelViolation, ModelViolationCode,
    ValidationResult,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FmError {
    #[error("unknown feature '{0}'")]
    UnknownFeature(String),
    #[error("model has {features} features, enumeration cap is {cap}")]
    ModelTooLarge { features: usize, cap: usize },
    #[error("invalid feature model: {}", join(.0))]
    InvalidModel(Vec<ModelViolation>),
    #[error("highlight is not a valid configuration: {}", .0.join("; "))]
    InvalidHighlight(Vec<String>),
}

fn join(v: &[ModelViolation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
