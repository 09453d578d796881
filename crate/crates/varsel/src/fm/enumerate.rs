use std::collections::HashMap;

use super::model::{Configuration, FeatureModel, GroupKind, Variability};
use super::validate::{check_selection, validate_model};
use super::FmError;

/// Feature-count limit used by the CLI when none is given.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

/// Every valid configuration of `model`, sorted lexicographically by their
/// sorted id lists.
///
/// Tree-valid selections are built bottom-up (product over children, choice
/// over group members) and then filtered through the constraints, so the
/// work is proportional to the number of tree-valid products rather than
/// `2^n`.
pub fn enumerate_configurations(model: &FeatureModel, cap: usize) -> Result<Vec<Configuration>, FmError> {
    if model.len() > cap {
        return Err(FmError::ModelTooLarge { features: model.len(), cap });
    }
    let validation = validate_model(model);
    if !validation.is_ok() {
        return Err(FmError::InvalidModel(validation.violations().to_vec()));
    }
    let root = model.root().expect("valid model has a root");
    let positions: HashMap<&str, usize> = model.features.iter().enumerate().map(|(i, f)| (f.id.as_str(), i)).collect();
    let index = |id: &str| positions[id];

    let partials = subtree(model, index(&root.id), &index);
    let mut out: Vec<Configuration> = partials
        .into_iter()
        .filter_map(|sel| {
            let mut mask = vec![false; model.len()];
            for &i in &sel {
                mask[i] = true;
            }
            let on = |id: &str| positions.get(id).is_some_and(|&i| mask[i]);
            check_selection(model, &on).is_valid().then(|| sel.iter().map(|&i| model.features[i].id.clone()).collect())
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

type Partial = Vec<usize>;

fn subtree(model: &FeatureModel, at: usize, index: &dyn Fn(&str) -> usize) -> Vec<Partial> {
    let id = model.features[at].id.as_str();
    let mut acc: Vec<Partial> = vec![vec![at]];

    for child in model.children_of(id).filter(|c| c.variability != Variability::Grouped) {
        let mut options = subtree(model, index(&child.id), index);
        if child.variability == Variability::Optional {
            options.push(Vec::new());
        }
        acc = product(&acc, &options);
    }

    for group in model.groups_of(id) {
        let per_child: Vec<Vec<Partial>> = group.children.iter().map(|c| subtree(model, index(c), index)).collect();
        let options = match group.kind {
            GroupKind::Alternative => per_child.into_iter().flatten().collect(),
            GroupKind::Or => {
                let mut combos: Vec<Partial> = vec![Vec::new()];
                for child_opts in per_child {
                    let mut with_empty = child_opts;
                    with_empty.push(Vec::new());
                    combos = product(&combos, &with_empty);
                }
                combos.retain(|c| !c.is_empty());
                combos
            }
        };
        acc = product(&acc, &options);
    }
    acc
}

fn product(left: &[Partial], right: &[Partial]) -> Vec<Partial> {
    let mut out = Vec::with_capacity(left.len() * right.len());
    for l in left {
        for r in right {
            let mut v = l.clone();
            v.extend_from_slice(r);
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fm::{Constraint, Expr, Feature, Group};

    fn example() -> FeatureModel {
        FeatureModel::new(
            vec![
                Feature::root("R"),
                Feature::child("A", "R", Variability::Optional),
                Feature::child("B", "R", Variability::Grouped),
                Feature::child("C", "R", Variability::Grouped),
            ],
            vec![Group::new("R", GroupKind::Alternative, ["B", "C"])],
            vec![],
        )
    }

    #[test]
    fn root_only() {
        let m = FeatureModel::new(vec![Feature::root("R")], vec![], vec![]);
        assert_eq!(enumerate_configurations(&m, 24).unwrap(), vec![Configuration::new(["R"])]);
    }

    #[test]
    fn optional_plus_alternative_gives_four() {
        // Frozen from a brute-force pass over all 16 subsets of {R,A,B,C}.
        let got = enumerate_configurations(&example(), 24).unwrap();
        let want = vec![
            Configuration::new(["A", "B", "R"]),
            Configuration::new(["A", "C", "R"]),
            Configuration::new(["B", "R"]),
            Configuration::new(["C", "R"]),
        ];
        assert_eq!(got, want);
    }

    #[test]
    fn constraint_removes_one() {
        let mut m = example();
        m.constraints.push(Constraint::new(Expr::implies(Expr::var("A"), Expr::var("B"))));
        let got = enumerate_configurations(&m, 24).unwrap();
        assert_eq!(got.len(), 3);
        assert!(!got.contains(&Configuration::new(["R", "A", "C"])));
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            enumerate_configurations(&example(), 3).unwrap_err(),
            FmError::ModelTooLarge { features: 4, cap: 3 }
        );
    }

    #[test]
    fn or_group_products() {
        let m = FeatureModel::new(
            vec![
                Feature::root("R"),
                Feature::child("X", "R", Variability::Grouped),
                Feature::child("Y", "R", Variability::Grouped),
                Feature::child("Z", "R", Variability::Grouped),
            ],
            vec![Group::new("R", GroupKind::Or, ["X", "Y", "Z"])],
            vec![],
        );
        assert_eq!(enumerate_configurations(&m, 24).unwrap().len(), 7);
    }
}
