#![allow(dead_code)]

use std::collections::BTreeMap;

use varsel::fm::{
    validate_configuration, validate_model, Configuration, Constraint, Expr, Feature, FeatureModel, Group, GroupKind,
    Variability,
};
use varsel::rng::SplitMix64;

fn random_expr(rng: &mut SplitMix64, ids: &[String], depth: usize) -> Expr {
    let leaf = depth == 0 || rng.below(3) == 0;
    if leaf {
        return Expr::var(ids[rng.below(ids.len())].clone());
    }
    let a = random_expr(rng, ids, depth - 1);
    match rng.below(4) {
        0 => Expr::not(a),
        1 => Expr::and(a, random_expr(rng, ids, depth - 1)),
        2 => Expr::or(a, random_expr(rng, ids, depth - 1)),
        _ => Expr::implies(a, random_expr(rng, ids, depth - 1)),
    }
}

const NAMES: &[&str] = &["Plain name", "with \"quotes\"", "back\\slash", "line\nbreak", "ünïcode"];

/// A structurally valid random feature model with `1..=max_features`
/// features, random groups, display names and up to three constraints.
pub fn random_model(seed: u64, max_features: usize) -> FeatureModel {
    let mut rng = SplitMix64::new(seed);
    let n = 1 + rng.below(max_features);
    let ids: Vec<String> = (0..n).map(|i| format!("F{i}")).collect();
    let mut parent = vec![None; n];
    let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, slot) in parent.iter_mut().enumerate().skip(1) {
        let p = rng.below(i);
        *slot = Some(p);
        children.entry(p).or_default().push(i);
    }

    let mut variability = vec![Variability::Mandatory; n];
    let mut groups = Vec::new();
    for (&p, kids) in &children {
        let mut kids = kids.clone();
        if kids.len() >= 2 && rng.below(2) == 0 {
            rng.shuffle(&mut kids);
            let size = 2 + rng.below(kids.len() - 1);
            let members: Vec<usize> = kids.drain(..size).collect();
            let kind = if rng.below(2) == 0 { GroupKind::Or } else { GroupKind::Alternative };
            for &m in &members {
                variability[m] = Variability::Grouped;
            }
            groups.push(Group::new(ids[p].clone(), kind, members.iter().map(|&m| ids[m].clone())));
        }
        for k in kids {
            variability[k] = if rng.below(2) == 0 { Variability::Mandatory } else { Variability::Optional };
        }
    }

    let features = (0..n)
        .map(|i| {
            let mut f = match parent[i] {
                None => Feature::root(ids[i].clone()),
                Some(p) => Feature::child(ids[i].clone(), ids[p].clone(), variability[i]),
            };
            if rng.below(4) == 0 {
                f = f.with_display_name(NAMES[rng.below(NAMES.len())]);
            }
            f
        })
        .collect();
    let constraints = (0..rng.below(4)).map(|_| Constraint::new(random_expr(&mut rng, &ids, 2))).collect();
    let model = FeatureModel::new(features, groups, constraints);
    assert!(validate_model(&model).is_ok(), "generator produced an invalid model: {model:?}");
    model
}

/// Every subset of the model's features that validates, in lexicographic
/// order of sorted ids.
pub fn brute_force_configurations(model: &FeatureModel) -> Vec<Configuration> {
    let ids: Vec<&str> = model.ids().into_iter().collect();
    let mut out: Vec<Configuration> = (0u32..1 << ids.len())
        .map(|mask| {
            (0..ids.len()).filter(|i| mask & (1 << i) != 0).map(|i| ids[i].to_string()).collect::<Configuration>()
        })
        .filter(|c| validate_configuration(model, c).unwrap().is_valid())
        .collect();
    out.sort();
    out
}

pub const HEART_CSV: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/heart_failure.csv");
