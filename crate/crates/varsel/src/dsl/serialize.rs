use crate::fm::{Feature, FeatureModel, Variability};

/// Writes `model` in `.fm` syntax. Children come in declaration order with
/// plain children before group blocks; constraints follow the tree.
pub fn serialize(model: &FeatureModel) -> String {
    let mut out = String::new();
    if let Some(root) = model.root() {
        write_feature(model, root, 0, &mut out);
    }
    for c in &model.constraints {
        out.push_str("constraint ");
        out.push_str(&c.formula.to_string());
        out.push('\n');
    }
    out
}

fn write_feature(model: &FeatureModel, f: &Feature, indent: usize, out: &mut String) {
    pad(out, indent);
    out.push_str("feature ");
    out.push_str(&f.id);
    match f.variability {
        Variability::Mandatory => out.push_str(" mandatory"),
        Variability::Optional => out.push_str(" optional"),
        Variability::Grouped => {}
    }
    if f.display_name != f.id {
        out.push_str(" \"");
        for ch in f.display_name.chars() {
            match ch {
                '"' => out.push_str("\\\""),
                '\\' => out.push_str("\\\\"),
                '\n' => out.push_str("\\n"),
                c => out.push(c),
            }
        }
        out.push('"');
    }
    out.push('\n');

    for child in model.children_of(&f.id).filter(|c| c.variability != Variability::Grouped) {
        write_feature(model, child, indent + 2, out);
    }
    for group in model.groups_of(&f.id) {
        pad(out, indent + 2);
        out.push_str(&group.kind.to_string());
        out.push_str(" {\n");
        for member in &group.children {
            if let Some(m) = model.feature(member) {
                write_feature(model, m, indent + 4, out);
            }
        }
        pad(out, indent + 2);
        out.push_str("}\n");
    }
}

fn pad(out: &mut String, n: usize) {
    out.extend(std::iter::repeat_n(' ', n));
}
