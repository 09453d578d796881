use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::expr::Expr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Variability {
    Mandatory,
    Optional,
    /// Member of an OR or ALTERNATIVE group owned by the parent.
    Grouped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Feature {
    pub id: String,
    pub display_name: String,
    pub variability: Variability,
    pub parent: Option<String>,
}

impl Feature {
    pub fn root(id: impl Into<String>) -> Self {
        let id = id.into();
        Self { display_name: id.clone(), id, variability: Variability::Mandatory, parent: None }
    }

    pub fn child(id: impl Into<String>, parent: impl Into<String>, variability: Variability) -> Self {
        let id = id.into();
        Self { display_name: id.clone(), id, variability, parent: Some(parent.into()) }
    }

    pub fn with_display_name(mut self, name: impl Into<String>) -> Self {
        self.display_name = name.into();
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GroupKind {
    /// At least one child when the parent is selected.
    Or,
    /// Exactly one child when the parent is selected.
    Alternative,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Or => f.write_str("or"),
            GroupKind::Alternative => f.write_str("alt"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub parent: String,
    pub kind: GroupKind,
    pub children: Vec<String>,
}

impl Group {
    pub fn new<I, S>(parent: impl Into<String>, kind: GroupKind, children: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self { parent: parent.into(), kind, children: children.into_iter().map(Into::into).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub formula: Expr,
}

impl Constraint {
    pub fn new(formula: Expr) -> Self {
        Self { formula }
    }
}

/// A feature tree with OR/ALTERNATIVE groups and propositional cross-tree
/// constraints.
///
/// Construction does not validate; run [`super::validate_model`] first.
/// Equality is structural: feature and group order do not matter, group
/// child order and constraint order do.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct FeatureModel {
    pub features: Vec<Feature>,
    pub groups: Vec<Group>,
    pub constraints: Vec<Constraint>,
}

impl FeatureModel {
    pub fn new(features: Vec<Feature>, groups: Vec<Group>, constraints: Vec<Constraint>) -> Self {
        Self { features, groups, constraints }
    }

    pub fn feature(&self, id: &str) -> Option<&Feature> {
        self.features.iter().find(|f| f.id == id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.feature(id).is_some()
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    /// The first parentless feature.
    pub fn root(&self) -> Option<&Feature> {
        self.features.iter().find(|f| f.parent.is_none())
    }

    /// Children of `id` in declaration order, grouped or not.
    pub fn children_of<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Feature> + 'a {
        self.features.iter().filter(move |f| f.parent.as_deref() == Some(id))
    }

    pub fn groups_of<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Group> + 'a {
        self.groups.iter().filter(move |g| g.parent == id)
    }

    pub fn ids(&self) -> BTreeSet<&str> {
        self.features.iter().map(|f| f.id.as_str()).collect()
    }

    /// Ancestors of `id`, nearest first. Stops on cycles.
    pub fn ancestors(&self, id: &str) -> Vec<&str> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        let mut current = self.feature(id).and_then(|f| f.parent.as_deref());
        while let Some(p) = current {
            if !seen.insert(p) {
                break;
            }
            out.push(p);
            current = self.feature(p).and_then(|f| f.parent.as_deref());
        }
        out
    }

    /// Feature ids in depth-first pre-order from the root: plain children in
    /// declaration order, then each owned group's members.
    pub fn preorder(&self) -> Vec<&str> {
        let mut out = Vec::with_capacity(self.features.len());
        let Some(root) = self.root() else { return out };
        let mut seen = BTreeSet::new();
        self.visit(&root.id, &mut seen, &mut out);
        out
    }

    fn visit<'a>(&'a self, id: &'a str, seen: &mut BTreeSet<&'a str>, out: &mut Vec<&'a str>) {
        if !seen.insert(id) {
            return;
        }
        out.push(id);
        for child in self.children_of(id).filter(|c| c.variability != Variability::Grouped) {
            self.visit(&child.id, seen, out);
        }
        for group in self.groups_of(id) {
            for child in &group.children {
                if let Some(f) = self.feature(child) {
                    self.visit(&f.id, seen, out);
                }
            }
        }
    }

    /// Places several models under a new mandatory root. Constraints are
    /// concatenated in argument order; `extra` constraints follow.
    pub fn merge_under(root: Feature, models: &[&FeatureModel], extra: Vec<Constraint>) -> FeatureModel {
        let mut merged = FeatureModel { features: vec![root.clone()], ..Default::default() };
        for model in models {
            for f in &model.features {
                let mut f = f.clone();
                if f.parent.is_none() {
                    f.parent = Some(root.id.clone());
                    f.variability = Variability::Mandatory;
                }
                merged.features.push(f);
            }
            merged.groups.extend(model.groups.iter().cloned());
            merged.constraints.extend(model.constraints.iter().cloned());
        }
        merged.constraints.extend(extra);
        merged
    }

    /// The subtree rooted at `id`, keeping only constraints whose variables
    /// all fall inside it.
    pub fn subtree(&self, id: &str) -> Option<FeatureModel> {
        let root = self.feature(id)?;
        let mut keep: BTreeSet<String> = BTreeSet::new();
        let mut stack = vec![root.id.clone()];
        while let Some(cur) = stack.pop() {
            if keep.insert(cur.clone()) {
                stack.extend(self.children_of(&cur).map(|c| c.id.clone()));
            }
        }
        let features = self
            .features
            .iter()
            .filter(|f| keep.contains(&f.id))
            .map(|f| {
                let mut f = f.clone();
                if f.id == id {
                    f.parent = None;
                    f.variability = Variability::Mandatory;
                }
                f
            })
            .collect();
        let groups = self.groups.iter().filter(|g| keep.contains(&g.parent)).cloned().collect();
        let constraints = self
            .constraints
            .iter()
            .filter(|c| c.formula.variables().iter().all(|v| keep.contains(*v)))
            .cloned()
            .collect();
        Some(FeatureModel { features, groups, constraints })
    }

    fn normalized(&self) -> (BTreeMap<&str, &Feature>, Vec<&Group>) {
        let features = self.features.iter().map(|f| (f.id.as_str(), f)).collect();
        let mut groups: Vec<&Group> = self.groups.iter().collect();
        groups.sort_by(|a, b| (&a.parent, a.kind, &a.children).cmp(&(&b.parent, b.kind, &b.children)));
        (features, groups)
    }
}

impl PartialEq for FeatureModel {
    fn eq(&self, other: &Self) -> bool {
        self.features.len() == other.features.len()
            && self.normalized() == other.normalized()
            && self.constraints == other.constraints
    }
}

impl Eq for FeatureModel {}

/// A concrete feature selection.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Configuration {
    pub selected: BTreeSet<String>,
}

impl Configuration {
    pub fn new<I, S>(ids: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self { selected: ids.into_iter().map(Into::into).collect() }
    }

    pub fn contains(&self, id: &str) -> bool {
        self.selected.contains(id)
    }

    pub fn insert(&mut self, id: impl Into<String>) -> bool {
        self.selected.insert(id.into())
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.selected.iter().map(String::as_str)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, id) in self.selected.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(id)?;
        }
        f.write_str("}")
    }
}

impl<S: Into<String>> FromIterator<S> for Configuration {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Self::new(iter)
    }
}
