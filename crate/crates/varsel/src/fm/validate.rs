use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::model::{Configuration, FeatureModel, GroupKind, Variability};
use super::FmError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ModelViolationCode {
    NoRoot,
    MultipleRoots,
    DuplicateId,
    UnknownParent,
    Cycle,
    GroupedRoot,
    GroupTooSmall,
    UnknownGroupParent,
    UnknownGroupMember,
    GroupMemberNotGrouped,
    GroupMemberWrongParent,
    MemberOfSeveralGroups,
    OrphanGroupedFeature,
    UnknownConstraintRef,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelViolation {
    pub code: ModelViolationCode,
    /// Offending feature id, or the group's parent id for group violations.
    pub subject: String,
    pub detail: String,
}

impl fmt::Display for ModelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({}): {}", self.code, self.subject, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationResult {
    Ok,
    Violations(Vec<ModelViolation>),
}

impl ValidationResult {
    pub fn is_ok(&self) -> bool {
        matches!(self, ValidationResult::Ok)
    }

    pub fn violations(&self) -> &[ModelViolation] {
        match self {
            ValidationResult::Ok => &[],
            ValidationResult::Violations(v) => v,
        }
    }

    pub fn has(&self, code: ModelViolationCode) -> bool {
        self.violations().iter().any(|v| v.code == code)
    }
}

/// Checks every structural invariant of a feature model. Violations are
/// returned as data; the function never fails.
pub fn validate_model(model: &FeatureModel) -> ValidationResult {
    let mut out = Vec::new();
    let mut push =
        |code, subject: &str, detail: String| out.push(ModelViolation { code, subject: subject.to_string(), detail });

    let mut seen = BTreeSet::new();
    for f in &model.features {
        if !seen.insert(f.id.as_str()) {
            push(ModelViolationCode::DuplicateId, &f.id, "identifier declared more than once".into());
        }
    }

    let roots: Vec<&str> = model.features.iter().filter(|f| f.parent.is_none()).map(|f| f.id.as_str()).collect();
    match roots.len() {
        0 => push(ModelViolationCode::NoRoot, "", "no feature without a parent".into()),
        1 => {
            let root = model.feature(roots[0]).expect("root exists");
            if root.variability == Variability::Grouped {
                push(ModelViolationCode::GroupedRoot, &root.id, "the root cannot be a group member".into());
            }
        }
        _ => {
            for r in &roots[1..] {
                push(ModelViolationCode::MultipleRoots, r, format!("second root besides '{}'", roots[0]));
            }
        }
    }

    for f in &model.features {
        let Some(parent) = f.parent.as_deref() else { continue };
        if parent == f.id {
            push(ModelViolationCode::Cycle, &f.id, "feature is its own parent".into());
        } else if !model.contains(parent) {
            push(ModelViolationCode::UnknownParent, &f.id, format!("parent '{parent}' does not exist"));
        } else if reaches_itself(model, &f.id) {
            push(ModelViolationCode::Cycle, &f.id, "parent chain loops back to this feature".into());
        }
    }

    let mut membership: BTreeMap<&str, usize> = BTreeMap::new();
    for g in &model.groups {
        if !model.contains(&g.parent) {
            push(ModelViolationCode::UnknownGroupParent, &g.parent, "group parent does not exist".into());
        }
        if g.children.len() < 2 {
            push(
                ModelViolationCode::GroupTooSmall,
                &g.parent,
                format!("{} group has {} child(ren), needs at least 2", g.kind, g.children.len()),
            );
        }
        let mut local = BTreeSet::new();
        for c in &g.children {
            *membership.entry(c.as_str()).or_default() += usize::from(local.insert(c.as_str()));
            match model.feature(c) {
                None => push(
                    ModelViolationCode::UnknownGroupMember,
                    c,
                    format!("member of {}-group under '{}'", g.kind, g.parent),
                ),
                Some(f) => {
                    if f.variability != Variability::Grouped {
                        push(
                            ModelViolationCode::GroupMemberNotGrouped,
                            c,
                            "group member must have GROUPED variability".into(),
                        );
                    }
                    if f.parent.as_deref() != Some(g.parent.as_str()) {
                        push(
                            ModelViolationCode::GroupMemberWrongParent,
                            c,
                            format!("group is owned by '{}'", g.parent),
                        );
                    }
                }
            }
        }
    }
    for (id, n) in &membership {
        if *n > 1 {
            push(ModelViolationCode::MemberOfSeveralGroups, id, format!("listed in {n} groups"));
        }
    }
    for f in &model.features {
        if f.variability == Variability::Grouped && !membership.contains_key(f.id.as_str()) {
            push(ModelViolationCode::OrphanGroupedFeature, &f.id, "GROUPED feature is not in any group".into());
        }
    }

    for (i, c) in model.constraints.iter().enumerate() {
        for v in c.formula.variables() {
            if !model.contains(v) {
                push(ModelViolationCode::UnknownConstraintRef, v, format!("referenced by constraint #{}", i + 1));
            }
        }
    }

    if out.is_empty() {
        ValidationResult::Ok
    } else {
        ValidationResult::Violations(out)
    }
}

fn reaches_itself(model: &FeatureModel, id: &str) -> bool {
    let mut seen = BTreeSet::new();
    let mut cur = model.feature(id).and_then(|f| f.parent.as_deref());
    while let Some(p) = cur {
        if p == id {
            return true;
        }
        if !seen.insert(p) {
            return false;
        }
        cur = model.feature(p).and_then(|f| f.parent.as_deref());
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "code", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConfigViolation {
    RootNotSelected { root: String },
    ParentNotSelected { feature: String, parent: String },
    MissingMandatory { feature: String },
    AlternativeViolation { parent: String, selected: usize },
    OrViolation { parent: String },
    ConstraintViolated { index: usize, formula: String },
}

impl fmt::Display for ConfigViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigViolation::RootNotSelected { root } => write!(f, "ROOT_NOT_SELECTED({root})"),
            ConfigViolation::ParentNotSelected { feature, parent } => {
                write!(f, "PARENT_NOT_SELECTED({feature}): parent {parent} unselected")
            }
            ConfigViolation::MissingMandatory { feature } => write!(f, "MISSING_MANDATORY({feature})"),
            ConfigViolation::AlternativeViolation { parent, selected } => {
                write!(f, "ALTERNATIVE_VIOLATION({parent}): {selected} children selected, need exactly 1")
            }
            ConfigViolation::OrViolation { parent } => write!(f, "OR_VIOLATION({parent}): no child selected"),
            ConfigViolation::ConstraintViolated { index, formula } => {
                write!(f, "CONSTRAINT_VIOLATED(#{}): {formula}", index + 1)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConfigValidity {
    Valid,
    Invalid(Vec<ConfigViolation>),
}

impl ConfigValidity {
    pub fn is_valid(&self) -> bool {
        matches!(self, ConfigValidity::Valid)
    }

    pub fn violations(&self) -> &[ConfigViolation] {
        match self {
            ConfigValidity::Valid => &[],
            ConfigValidity::Invalid(v) => v,
        }
    }
}

/// Checks a selection against the tree semantics and every constraint.
/// Unselected features are false. The model is assumed to pass
/// [`validate_model`].
pub fn validate_configuration(model: &FeatureModel, config: &Configuration) -> Result<ConfigValidity, FmError> {
    if let Some(unknown) = config.iter().find(|id| !model.contains(id)) {
        return Err(FmError::UnknownFeature(unknown.to_string()));
    }
    Ok(check_selection(model, &|id| config.contains(id)))
}

pub(crate) fn check_selection(model: &FeatureModel, selected: &dyn Fn(&str) -> bool) -> ConfigValidity {
    let mut out = Vec::new();
    if let Some(root) = model.root() {
        if !selected(&root.id) {
            out.push(ConfigViolation::RootNotSelected { root: root.id.clone() });
        }
    }
    for f in &model.features {
        let Some(parent) = f.parent.as_deref() else { continue };
        let parent_on = selected(parent);
        if selected(&f.id) && !parent_on {
            out.push(ConfigViolation::ParentNotSelected { feature: f.id.clone(), parent: parent.to_string() });
        }
        if parent_on && f.variability == Variability::Mandatory && !selected(&f.id) {
            out.push(ConfigViolation::MissingMandatory { feature: f.id.clone() });
        }
    }
    for g in &model.groups {
        if !selected(&g.parent) {
            continue;
        }
        let n = g.children.iter().filter(|c| selected(c)).count();
        match g.kind {
            GroupKind::Alternative if n != 1 => {
                out.push(ConfigViolation::AlternativeViolation { parent: g.parent.clone(), selected: n })
            }
            GroupKind::Or if n == 0 => out.push(ConfigViolation::OrViolation { parent: g.parent.clone() }),
            _ => {}
        }
    }
    for (index, c) in model.constraints.iter().enumerate() {
        if !c.formula.eval(selected) {
            out.push(ConfigViolation::ConstraintViolated { index, formula: c.formula.to_string() });
        }
    }
    if out.is_empty() {
        ConfigValidity::Valid
    } else {
        ConfigValidity::Invalid(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fm::{Constraint, Expr, Feature, Group};

    fn alt_model() -> FeatureModel {
        FeatureModel::new(
            vec![
                Feature::root("R"),
                Feature::child("B", "R", Variability::Grouped),
                Feature::child("C", "R", Variability::Grouped),
            ],
            vec![Group::new("R", GroupKind::Alternative, ["B", "C"])],
            vec![],
        )
    }

    #[test]
    fn minimal_model_is_ok() {
        let m = FeatureModel::new(vec![Feature::root("R")], vec![], vec![]);
        assert!(validate_model(&m).is_ok());
    }

    #[test]
    fn one_child_group_is_too_small() {
        let m = FeatureModel::new(
            vec![Feature::root("R"), Feature::child("B", "R", Variability::Grouped)],
            vec![Group::new("R", GroupKind::Or, ["B"])],
            vec![],
        );
        let r = validate_model(&m);
        assert!(r.has(ModelViolationCode::GroupTooSmall), "{r:?}");
        assert_eq!(r.violations()[0].subject, "R");
    }

    #[test]
    fn self_parent_is_a_cycle() {
        let mut m = FeatureModel::new(
            vec![Feature::root("R"), Feature::child("A", "A", Variability::Optional)],
            vec![],
            vec![],
        );
        assert!(validate_model(&m).has(ModelViolationCode::Cycle));
        m.features[1].parent = Some("R".into());
        assert!(validate_model(&m).is_ok());
    }

    #[test]
    fn longer_cycles_and_structure_errors() {
        let m = FeatureModel::new(
            vec![
                Feature::root("R"),
                Feature::child("A", "B", Variability::Optional),
                Feature::child("B", "A", Variability::Optional),
                Feature::child("C", "Zed", Variability::Optional),
                Feature::child("D", "R", Variability::Grouped),
                Feature::root("R2"),
            ],
            vec![],
            vec![Constraint::new(Expr::var("Nope"))],
        );
        let r = validate_model(&m);
        for code in [
            ModelViolationCode::Cycle,
            ModelViolationCode::UnknownParent,
            ModelViolationCode::OrphanGroupedFeature,
            ModelViolationCode::MultipleRoots,
            ModelViolationCode::UnknownConstraintRef,
        ] {
            assert!(r.has(code), "missing {code:?} in {r:?}");
        }
    }

    #[test]
    fn group_membership_rules() {
        let m = FeatureModel::new(
            vec![
                Feature::root("R"),
                Feature::child("A", "R", Variability::Optional),
                Feature::child("B", "R", Variability::Grouped),
                Feature::child("C", "A", Variability::Grouped),
            ],
            vec![Group::new("R", GroupKind::Or, ["A", "B", "C"]), Group::new("R", GroupKind::Alternative, ["B", "X"])],
            vec![],
        );
        let r = validate_model(&m);
        for code in [
            ModelViolationCode::GroupMemberNotGrouped,
            ModelViolationCode::GroupMemberWrongParent,
            ModelViolationCode::MemberOfSeveralGroups,
            ModelViolationCode::UnknownGroupMember,
        ] {
            assert!(r.has(code), "missing {code:?} in {r:?}");
        }
    }

    #[test]
    fn missing_mandatory_child() {
        let m = FeatureModel::new(
            vec![Feature::root("R"), Feature::child("M", "R", Variability::Mandatory)],
            vec![],
            vec![],
        );
        let v = validate_configuration(&m, &Configuration::new(["R"])).unwrap();
        assert_eq!(v.violations(), &[ConfigViolation::MissingMandatory { feature: "M".into() }]);
    }

    #[test]
    fn alternative_with_two_children_selected() {
        let v = validate_configuration(&alt_model(), &Configuration::new(["R", "B", "C"])).unwrap();
        assert_eq!(v.violations(), &[ConfigViolation::AlternativeViolation { parent: "R".into(), selected: 2 }]);
    }

    #[test]
    fn tautological_constraint_is_valid() {
        let m = FeatureModel::new(
            vec![Feature::root("R"), Feature::child("A", "R", Variability::Optional)],
            vec![],
            vec![Constraint::new(Expr::implies(Expr::var("A"), Expr::var("R")))],
        );
        assert!(validate_configuration(&m, &Configuration::new(["R", "A"])).unwrap().is_valid());
    }

    #[test]
    fn unknown_feature_is_an_error() {
        let err = validate_configuration(&alt_model(), &Configuration::new(["R", "Q"])).unwrap_err();
        assert_eq!(err, FmError::UnknownFeature("Q".into()));
    }

    #[test]
    fn or_group_needs_a_child_and_root_must_be_selected() {
        let mut m = alt_model();
        m.groups[0].kind = GroupKind::Or;
        let v = validate_configuration(&m, &Configuration::new(["R"])).unwrap();
        assert_eq!(v.violations(), &[ConfigViolation::OrViolation { parent: "R".into() }]);
        assert!(validate_configuration(&m, &Configuration::new(["R", "B", "C"])).unwrap().is_valid());
        let v = validate_configuration(&m, &Configuration::new(["B"])).unwrap();
        assert!(v.violations().contains(&ConfigViolation::RootNotSelected { root: "R".into() }));
        assert!(v.violations().iter().any(|x| matches!(x, ConfigViolation::ParentNotSelected { .. })));
    }
}
