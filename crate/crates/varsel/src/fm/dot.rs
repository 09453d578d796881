use std::fmt::Write as _;

use super::model::{Configuration, FeatureModel, Variability};
use super::validate::{validate_configuration, validate_model};
use super::FmError;

const HIGHLIGHT: &str = r##"style="rounded,filled", fillcolor="#9ecae1", penwidth=2"##;

/// Renders a feature model as a Graphviz digraph.
///
/// Mandatory edges end in a filled dot, optional edges in a hollow one, and
/// group edges carry the group kind as label. Features of `highlight` are
/// filled. Output depends only on the arguments.
pub fn to_dot(model: &FeatureModel, highlight: Option<&Configuration>) -> Result<String, FmError> {
    let validation = validate_model(model);
    if !validation.is_ok() {
        return Err(FmError::InvalidModel(validation.violations().to_vec()));
    }
    if let Some(config) = highlight {
        let validity =
            validate_configuration(model, config).map_err(|e| FmError::InvalidHighlight(vec![e.to_string()]))?;
        if !validity.is_valid() {
            return Err(FmError::InvalidHighlight(validity.violations().iter().map(ToString::to_string).collect()));
        }
    }

    let mut out = String::new();
    out.push_str("digraph feature_model {\n");
    out.push_str("  rankdir=TB;\n");
    out.push_str("  node [shape=box, style=rounded, fontname=\"Helvetica\"];\n");
    out.push_str("  edge [arrowhead=none];\n");

    let order = model.preorder();
    for id in &order {
        let f = model.feature(id).expect("preorder yields known ids");
        let lit = highlight.is_some_and(|c| c.contains(id));
        write!(out, "  {} [label={}", quote(id), quote(&f.display_name)).unwrap();
        if lit {
            write!(out, ", {HIGHLIGHT}").unwrap();
        }
        out.push_str("];\n");
    }

    for id in &order {
        for child in model.children_of(id) {
            let attrs = match child.variability {
                Variability::Mandatory => "arrowhead=dot".to_string(),
                Variability::Optional => "arrowhead=odot".to_string(),
                Variability::Grouped => {
                    let kind = model
                        .groups_of(id)
                        .find(|g| g.children.contains(&child.id))
                        .map(|g| g.kind.to_string())
                        .unwrap_or_default();
                    format!("arrowhead=none, label={}", quote(&kind))
                }
            };
            writeln!(out, "  {} -> {} [{attrs}];", quote(id), quote(&child.id)).unwrap();
        }
    }

    if !model.constraints.is_empty() {
        let mut text = String::new();
        for c in &model.constraints {
            text.push_str(&c.formula.to_string());
            text.push_str("\\l");
        }
        writeln!(out, "  \"__constraints\" [shape=note, label=\"{}\"];", escape(&text).replace("\\\\l", "\\l"))
            .unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", escape(s))
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fm::{Constraint, Expr, Feature, Group, GroupKind};

    fn model() -> FeatureModel {
        FeatureModel::new(
            vec![
                Feature::root("R").with_display_name("Root \"quoted\""),
                Feature::child("A", "R", Variability::Optional),
                Feature::child("M", "R", Variability::Mandatory),
                Feature::child("B", "R", Variability::Grouped),
                Feature::child("C", "R", Variability::Grouped),
            ],
            vec![Group::new("R", GroupKind::Alternative, ["B", "C"])],
            vec![Constraint::new(Expr::implies(Expr::var("A"), Expr::var("B")))],
        )
    }

    #[test]
    fn root_only_has_one_node() {
        let m = FeatureModel::new(vec![Feature::root("R")], vec![], vec![]);
        let dot = to_dot(&m, None).unwrap();
        assert_eq!(dot.matches("[label=").count(), 1);
        assert!(!dot.contains("->"));
    }

    #[test]
    fn highlight_marks_selected_nodes_only() {
        let cfg = Configuration::new(["R", "M", "A", "B"]);
        let dot = to_dot(&model(), Some(&cfg)).unwrap();
        for line in dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")) {
            let id = line.trim().split(' ').next().unwrap().trim_matches('"');
            if id == "__constraints" {
                continue;
            }
            assert_eq!(line.contains("fillcolor"), cfg.contains(id), "{line}");
        }
        assert!(dot.contains("\"R\" -> \"B\" [arrowhead=none, label=\"alt\"]"));
        assert!(dot.contains("\"R\" -> \"A\" [arrowhead=odot]"));
        assert!(dot.contains("Root \\\"quoted\\\""));
        assert!(dot.contains("A => B\\l"));
    }

    #[test]
    fn invalid_highlight_is_rejected() {
        let err = to_dot(&model(), Some(&Configuration::new(["R"]))).unwrap_err();
        assert!(matches!(err, FmError::InvalidHighlight(_)));
    }

    #[test]
    fn output_is_deterministic() {
        let cfg = Configuration::new(["R", "M", "C"]);
        assert_eq!(to_dot(&model(), Some(&cfg)).unwrap(), to_dot(&model(), Some(&cfg)).unwrap());
    }
}
