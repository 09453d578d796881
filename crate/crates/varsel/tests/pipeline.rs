mod common;

use std::io::Write;

use varsel::data::{load_csv, LoadOptions, TabularDataset};
use varsel::learners::{parse_predictions, ImportOptions};
use varsel::metrics::{abad, confusion, di, eoo, group_confusion, performance, MetricsError};
use varsel::pipeline::{
    audit, audit_set, render_instance, run_pipeline, Decision, Outcome, PipelineError, SelectionReport, Settings,
    TriggerRule,
};
use varsel::rng::SplitMix64;
use varsel::selector::AlgorithmKind;

fn heart() -> TabularDataset {
    load_csv(common::HEART_CSV, &LoadOptions::default().with_target("DEATH_EVENT").with_sensitive("sex")).unwrap()
}

fn with_criterion(text: &str) -> Settings {
    Settings { criterion: text.parse().unwrap(), ..Settings::default() }
}

const TRAINABLE: [AlgorithmKind; 4] =
    [AlgorithmKind::LinearSvc, AlgorithmKind::Knn, AlgorithmKind::RbfSvc, AlgorithmKind::Ensemble];

#[test]
fn unreachable_criterion_exhausts_the_queue() {
    let r = run_pipeline(&heart(), &with_criterion("f1 >= 1.01")).unwrap();
    assert_eq!(r.outcome, Outcome::Exhausted);
    assert_eq!(r.candidates.iter().map(|c| c.algorithm).collect::<Vec<_>>(), TRAINABLE);
    assert!(r.candidates.iter().all(|c| c.decision == Decision::RejectedQuality));
    assert!(r.configuration.is_none());
    assert!(matches!(render_instance(&r), Err(PipelineError::NotAccepted)));
}

#[test]
fn trivial_criterion_accepts_the_head() {
    let r = run_pipeline(&heart(), &with_criterion("f1 >= 0.0")).unwrap();
    assert_eq!(r.outcome, Outcome::Accepted { algorithm: AlgorithmKind::LinearSvc });
    assert_eq!(r.candidates.len(), 1);
    let config = r.configuration.as_ref().unwrap();
    for id in ["LinearSVC", "Classification", "F1", "SmallSample", "EOO"] {
        assert!(config.contains(id), "{id}");
    }
    let dot = render_instance(&r).unwrap();
    let line = dot.lines().find(|l| l.trim_start().starts_with("\"LinearSVC\"")).unwrap();
    assert!(line.contains("filled"));
    assert_eq!(render_instance(&r).unwrap(), dot);
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let settings = Settings::default();
    let a = run_pipeline(&heart(), &settings).unwrap();
    let b = run_pipeline(&heart(), &settings).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(SelectionReport::from_json(&a.to_json()).unwrap(), a);
    let value: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
    for key in ["profile", "queue", "candidates", "outcome", "seed", "tool_version"] {
        assert!(value.get(key).is_some(), "{key}");
    }
    assert_eq!((a.train_size, a.test_size), (239, 60));
}

#[test]
fn lowering_the_threshold_never_moves_acceptance_later() {
    let ds = heart();
    let position = |t: f64| {
        let r = run_pipeline(&ds, &with_criterion(&format!("f1 >= {t}"))).unwrap();
        r.accepted().map_or(usize::MAX, |a| r.queue.items.iter().position(|&k| k == a).unwrap())
    };
    let mut last = usize::MAX;
    for t in [0.95, 0.9, 0.85, 0.8, 0.75, 0.7, 0.6, 0.5, 0.0] {
        let p = position(t);
        assert!(p <= last, "threshold {t}");
        last = p;
    }
}

#[test]
fn trigger_advance_rejects_and_moves_on() {
    let mut settings = with_criterion("f1 >= 0.0");
    settings.triggers = vec![TriggerRule::parse("eoo > -1 -> ADVANCE_QUEUE", 1).unwrap()];
    let r = run_pipeline(&heart(), &settings).unwrap();
    assert_eq!(r.outcome, Outcome::Exhausted);
    assert_eq!(r.candidates.len(), 4);
    assert!(r.candidates.iter().all(|c| c.decision == Decision::RejectedTrigger));
}

#[test]
fn trigger_flag_accepts_with_a_flag() {
    let mut settings = with_criterion("f1 >= 0.0");
    settings.triggers = vec![TriggerRule::parse("eoo > -1 -> FLAG", 1).unwrap()];
    let r = run_pipeline(&heart(), &settings).unwrap();
    assert_eq!(r.outcome, Outcome::Accepted { algorithm: AlgorithmKind::LinearSvc });
    assert_eq!(r.candidates[0].decision, Decision::Flagged);
}

#[test]
fn fairness_is_skipped_without_a_sensitive_column() {
    let ds = load_csv(common::HEART_CSV, &LoadOptions::default().with_target("DEATH_EVENT")).unwrap();
    let r = run_pipeline(&ds, &with_criterion("f1 >= 0.0")).unwrap();
    assert!(r.candidates[0].fairness.is_none());
    assert!(!r.configuration.unwrap().contains("EOO"));
}

fn write_temp(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

/// Rows reproducing a grouped confusion matrix; protected group "m".
fn fixture(p: [u64; 4], u: [u64; 4]) -> String {
    let mut text = String::from("row_id,y_true,y_pred,group\n");
    let mut id = 0;
    for (group, counts) in [("m", p), ("f", u)] {
        for (n, (t, pr)) in counts.iter().zip([("1", "1"), ("0", "1"), ("1", "0"), ("0", "0")]) {
            for _ in 0..*n {
                id += 1;
                text.push_str(&format!("{id},{t},{pr},{group}\n"));
            }
        }
    }
    text
}

#[test]
fn audit_reproduces_fixture_values() {
    // tp, fp, fn, tn per group.
    let eoo_file = write_temp(&fixture([3, 0, 1, 0], [3, 0, 5, 0]));
    assert_eq!(audit(eoo_file.path(), "m", "1", None).unwrap().fairness.eoo, 0.375);

    let di_file = write_temp(&fixture([3, 2, 1, 4], [4, 3, 2, 6]));
    let di_value = audit(di_file.path(), "m", "1", None).unwrap().fairness.di.unwrap();
    assert!((di_value - 15.0 / 14.0).abs() < 1e-12);

    let abad_file = write_temp(&fixture([10, 0, 1, 10], [4, 0, 1, 3]));
    assert_eq!(audit(abad_file.path(), "m", "1", None).unwrap().fairness.abad, 3.0);

    let sym = write_temp(&fixture([2, 1, 1, 3], [2, 1, 1, 3]));
    let r = audit(sym.path(), "m", "1", None).unwrap();
    assert_eq!((r.fairness.eoo, r.fairness.di), (0.0, Some(1.0)));

    let single = write_temp("row_id,y_true,y_pred,group\n1,1,1,m\n2,0,0,m\n");
    assert!(matches!(audit(single.path(), "m", "1", None), Err(PipelineError::Metrics(MetricsError::EmptyGroup(_)))));
}

#[test]
fn audit_equals_manual_composition() {
    let mut rng = SplitMix64::new(77);
    for _ in 0..200 {
        let mut text = String::from("row_id,y_true,y_pred,group\n");
        for id in 1..=(4 + rng.below(80)) {
            let g = if rng.below(2) == 0 { "m" } else { "f" };
            text.push_str(&format!("{id},{},{},{g}\n", rng.below(2), rng.below(2)));
        }
        let set = parse_predictions(&text, &ImportOptions { positive_label: Some("1".into()), ..Default::default() })
            .unwrap();
        let gc = match group_confusion(&set, "m", "1") {
            Ok(gc) => gc,
            Err(_) => continue,
        };
        match (audit_set(&set, "m", "1"), eoo(&gc)) {
            (Ok(r), Ok(e)) => {
                assert_eq!(r.confusion, confusion(&set, "1").unwrap());
                assert_eq!(r.performance, performance(&r.confusion).unwrap());
                assert_eq!(r.fairness.eoo, e);
                assert_eq!(r.fairness.di, di(&gc).ok());
                assert_eq!(r.fairness.abad, abad(&gc));
            }
            (Err(_), Err(_)) => {}
            (a, b) => panic!("audit {a:?} vs eoo {b:?}"),
        }
    }
}
