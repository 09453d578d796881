//! Feature models shipped with the crate.

use crate::fm::{Constraint, Feature, FeatureModel};

use super::{parse, parse_expr};

pub const ML_TECHNIQUES_FM: &str = include_str!("../../models/ml_techniques.fm");
pub const MODELING_ASSUMPTIONS_FM: &str = include_str!("../../models/modeling_assumptions.fm");

/// Root id of the combined selection model.
pub const SELECTION_ROOT: &str = "ModelSelection";

/// Constraints linking techniques to assumptions. They mirror the selection
/// heuristics, so every queue the selector produces maps to a valid
/// configuration.
pub const SELECTION_LINKS: &[&str] = &[
    "Classification => Labeled & PredictCategory",
    "Regression => PredictQuantity",
    "Clustering => Unlabeled & PredictCategory",
    "LinearSVC => !LargeSample",
    "SGDClassifier => LargeSample",
    "SGDRegressor => LargeSample",
    "NaiveBayes => TextData",
    "(F1 | EO | EOO | DI | ABAD | AAOD) => Classification",
];

pub fn ml_techniques() -> FeatureModel {
    parse(ML_TECHNIQUES_FM).expect("bundled ml_techniques.fm parses")
}

pub fn modeling_assumptions() -> FeatureModel {
    parse(MODELING_ASSUMPTIONS_FM).expect("bundled modeling_assumptions.fm parses")
}

/// Both bundled models under one root, plus [`SELECTION_LINKS`].
pub fn selection_model() -> FeatureModel {
    let links = SELECTION_LINKS.iter().map(|s| Constraint::new(parse_expr(s).expect("bundled link parses"))).collect();
    FeatureModel::merge_under(
        Feature::root(SELECTION_ROOT).with_display_name("ML Model Selection"),
        &[&ml_techniques(), &modeling_assumptions()],
        links,
    )
}
