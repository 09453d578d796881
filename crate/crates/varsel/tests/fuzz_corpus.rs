//! Replays the checked-in fuzz corpus through the same properties the fuzz
//! targets assert, so seeds stay meaningful on a stable toolchain.

use std::fs;
use std::path::PathBuf;

use varsel::data::{parse_csv, profile, LoadOptions, ProfileOptions};
use varsel::dsl::{parse, parse_expr, serialize};
use varsel::learners::{parse_predictions, predict, ImportOptions, TrainedModel};
use varsel::pipeline::{
    audit_set, parse_triggers, render_instance, QualityCriterion, SelectionReport, Settings, TriggerRule,
};
use varsel::selector::{recommend, SelectorThresholds};

fn corpus(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut files: Vec<_> =
        fs::read_dir(&dir).unwrap_or_else(|e| panic!("{}: {e}", dir.display())).map(|e| e.unwrap().path()).collect();
    files.sort();
    assert!(!files.is_empty(), "no seeds for {target}");
    files.into_iter().map(|p| (p.display().to_string(), fs::read_to_string(&p).unwrap())).collect()
}

#[test]
fn fm_parse_seeds() {
    let mut parsed = 0;
    for (name, text) in corpus("fm_parse") {
        if let Ok(model) = parse(&text) {
            assert_eq!(parse(&serialize(&model)).unwrap(), model, "{name}");
            varsel::fm::to_dot(&model, None).unwrap();
            parsed += 1;
        }
    }
    assert!(parsed >= 3);
}

#[test]
fn expr_parse_seeds() {
    for (name, text) in corpus("expr_parse") {
        if let Ok(expr) = parse_expr(&text) {
            assert_eq!(parse_expr(&expr.to_string()).unwrap(), expr, "{name}");
        }
    }
}

#[test]
fn csv_parse_seeds() {
    let t = SelectorThresholds::default();
    let mut profiled = 0;
    for (_, text) in corpus("csv_parse") {
        let (target, body) = text.split_once('\n').unwrap_or(("", &text));
        let opts = if target.is_empty() { LoadOptions::default() } else { LoadOptions::default().with_target(target) };
        if let Ok(ds) = parse_csv(body, &opts) {
            if let Ok(p) = profile(&ds, &ProfileOptions::default(), &t) {
                assert!(recommend(&p, &t).items.last().unwrap().is_terminal());
                profiled += 1;
            }
        }
    }
    assert!(profiled >= 1);
}

#[test]
fn predictions_parse_seeds() {
    for (_, text) in corpus("predictions_parse") {
        if let Ok(set) = parse_predictions(&text, &ImportOptions::default()) {
            let group = set.entries[0].group.clone();
            let positive = set.labels.last().cloned().unwrap();
            let _ = audit_set(&set, &group, &positive);
        }
    }
}

#[test]
fn rule_parse_seeds() {
    for (name, text) in corpus("rule_parse") {
        let c = text.parse::<QualityCriterion>();
        let r = TriggerRule::parse(&text, 0);
        assert!(c.is_ok() || r.is_ok(), "{name} parses as neither");
        if let Ok(c) = c {
            assert_eq!(c.to_string().parse::<QualityCriterion>().unwrap(), c);
        }
        if let Ok(r) = r {
            assert_eq!(TriggerRule::parse(&r.to_string(), 0).unwrap(), r);
        }
    }
}

#[test]
fn settings_toml_seeds() {
    for (name, text) in corpus("settings_toml") {
        let ok = Settings::from_toml(&text).is_ok()
            || parse_triggers(&text).is_ok()
            || SelectorThresholds::from_toml(&text).is_ok();
        assert!(ok, "{name} rejected by every reader");
    }
}

#[test]
fn report_json_seeds() {
    for (name, text) in corpus("report_json") {
        let report = SelectionReport::from_json(&text).unwrap();
        assert_eq!(report.to_json(), text, "{name} is not normalized");
        let _ = report.to_text();
        let _ = render_instance(&report);
    }
}

#[test]
fn model_json_seeds() {
    for (name, text) in corpus("model_json") {
        let model = TrainedModel::from_json(&text).unwrap();
        let row = vec!["1".to_string(), "a".to_string()];
        assert_eq!(predict(&model, &[row]).unwrap().len(), 1, "{name}");
    }
}
