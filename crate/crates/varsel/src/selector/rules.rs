use serde::{Deserialize, Serialize};

use crate::data::{DatasetProfile, PredictionKind};

use super::{AlgorithmKind, SelectorThresholds};

use AlgorithmKind as A;

/// FIFO queue of candidates, each with the rule trace that put it there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodQueue {
    pub items: Vec<AlgorithmKind>,
    pub rationale: Vec<String>,
}

impl MethodQueue {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Items that can be trained, in queue order, up to the first placeholder.
    pub fn trainable(&self) -> impl Iterator<Item = AlgorithmKind> + '_ {
        self.items.iter().copied().take_while(|k| !k.is_terminal())
    }
}

/// One element of a branch: either a condition that holds from here on, or
/// the next candidate.
enum Step {
    Cond(String),
    Pick(AlgorithmKind),
}

struct Branch {
    /// Conditions selecting the branch, or `None` when it does not apply.
    guard: fn(&DatasetProfile, &SelectorThresholds) -> Option<Vec<String>>,
    /// Candidates in try-next-on-failure order.
    chain: fn(&DatasetProfile, &SelectorThresholds) -> Vec<Step>,
}

fn lt(value: usize, bound: usize) -> String {
    if value < bound {
        format!("{value} < {bound}")
    } else {
        format!("{value} ≥ {bound}")
    }
}

/// The selection flowchart, first matching branch wins. A failing
/// candidate ("not working") hands over to the next one in its chain.
const RULES: &[Branch] = &[
    // Classification, fewer than `large_dataset` samples.
    Branch {
        guard: |p, t| {
            (p.prediction_kind == PredictionKind::Category && p.labeled && p.sample_size < t.large_dataset)
                .then(|| vec!["prediction=CATEGORY".into(), "labeled".into(), lt(p.sample_size, t.large_dataset)])
        },
        chain: |p, _| {
            let mut v = vec![Step::Pick(A::LinearSvc)];
            if p.text_data {
                v.extend([Step::Cond("text data".into()), Step::Pick(A::NaiveBayes)]);
            } else {
                v.extend([
                    Step::Cond("not text data".into()),
                    Step::Pick(A::Knn),
                    Step::Pick(A::RbfSvc),
                    Step::Pick(A::Ensemble),
                ]);
            }
            v
        },
    },
    // Classification, large.
    Branch {
        guard: |p, t| {
            (p.prediction_kind == PredictionKind::Category && p.labeled && p.sample_size >= t.large_dataset)
                .then(|| vec!["prediction=CATEGORY".into(), "labeled".into(), lt(p.sample_size, t.large_dataset)])
        },
        chain: |_, _| vec![Step::Pick(A::SgdClassifier), Step::Pick(A::KernelApproximation)],
    },
    // Clustering.
    Branch {
        guard: |p, _| {
            (p.prediction_kind == PredictionKind::Category && !p.labeled)
                .then(|| vec!["prediction=CATEGORY".into(), "unlabeled".into()])
        },
        chain: |p, t| {
            let small = p.sample_size < t.clustering_large;
            let size = lt(p.sample_size, t.clustering_large);
            match p.known_category_count {
                Some(k) => vec![
                    Step::Cond(format!("number of categories known ({k})")),
                    Step::Cond(size),
                    Step::Pick(if small { A::Kmeans } else { A::MinibatchKmeans }),
                    Step::Pick(A::SpectralEmbedding),
                ],
                None if small => vec![
                    Step::Cond("number of categories unknown".into()),
                    Step::Cond(size),
                    Step::Pick(A::Meanshift),
                    Step::Pick(A::Vbgmm),
                ],
                None => vec![Step::Cond("number of categories unknown".into()), Step::Cond(size)],
            }
        },
    },
    // Regression, fewer than `large_dataset` samples.
    Branch {
        guard: |p, t| {
            (p.prediction_kind == PredictionKind::Quantity && p.sample_size < t.large_dataset)
                .then(|| vec!["prediction=QUANTITY".into(), lt(p.sample_size, t.large_dataset)])
        },
        chain: |p, t| {
            let dims = lt(p.feature_count, t.few_features);
            let mut v = if p.few_features {
                vec![Step::Cond(format!("few features ({dims})")), Step::Pick(A::Lasso), Step::Pick(A::Elasticnet)]
            } else {
                vec![Step::Cond(format!("many features ({dims})")), Step::Pick(A::Ridge), Step::Pick(A::SvrLinear)]
            };
            v.extend([Step::Pick(A::SvrRbf), Step::Pick(A::EnsembleRegressor)]);
            v
        },
    },
    // Regression, large.
    Branch {
        guard: |p, t| {
            (p.prediction_kind == PredictionKind::Quantity && p.sample_size >= t.large_dataset)
                .then(|| vec!["prediction=QUANTITY".into(), lt(p.sample_size, t.large_dataset)])
        },
        chain: |_, _| vec![Step::Pick(A::SgdRegressor)],
    },
    // Dimensionality reduction.
    Branch {
        guard: |p, _| {
            (p.prediction_kind == PredictionKind::JustLooking).then(|| vec!["prediction=JUST_LOOKING".into()])
        },
        chain: |p, t| {
            let mut v = vec![Step::Pick(A::RandomizedPca), Step::Cond(lt(p.sample_size, t.clustering_large))];
            if p.sample_size < t.clustering_large {
                v.extend([Step::Pick(A::Isomap), Step::Pick(A::SpectralEmbedding), Step::Pick(A::Lle)]);
            } else {
                v.push(Step::Pick(A::KernelApproximation));
            }
            v
        },
    },
];

/// Maps a profile to its candidate queue by walking the selection
/// heuristics. Total: every profile gets a queue ending in a placeholder.
pub fn recommend(profile: &DatasetProfile, thresholds: &SelectorThresholds) -> MethodQueue {
    if profile.sample_size < thresholds.min_samples {
        return MethodQueue {
            items: vec![A::GetMoreData],
            rationale: vec![format!(
                "sample_size {} < {} (min_samples) → GET_MORE_DATA",
                profile.sample_size, thresholds.min_samples
            )],
        };
    }

    let mut conditions = vec![format!("sample_size {} ≥ {}", profile.sample_size, thresholds.min_samples)];
    let mut queue = MethodQueue { items: Vec::new(), rationale: Vec::new() };

    match RULES.iter().find_map(|b| (b.guard)(profile, thresholds).map(|g| (b, g))) {
        Some((branch, guard)) => {
            conditions.extend(guard);
            for step in (branch.chain)(profile, thresholds) {
                match step {
                    Step::Cond(c) => conditions.push(c),
                    Step::Pick(kind) => {
                        debug_assert!(!queue.items.contains(&kind), "duplicate {kind} in rule table");
                        queue.items.push(kind);
                        queue.rationale.push(format!("{} → {kind}", conditions.join("; ")));
                        conditions.push(format!("{kind} not working"));
                    }
                }
            }
        }
        None => {
            conditions.push(format!("prediction={}", profile.prediction_kind));
            if !profile.labeled {
                conditions.push("unlabeled".into());
            }
            conditions.push("no heuristic applies".into());
        }
    }

    queue.items.push(A::ToughLuck);
    queue.rationale.push(format!("{} → {}", conditions.join("; "), A::ToughLuck));
    queue
}

/// One rule trace per queue item, in queue order.
pub fn explain(queue: &MethodQueue) -> Vec<String> {
    queue.rationale.clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn heart() -> DatasetProfile {
        DatasetProfile {
            sample_size: 299,
            feature_count: 12,
            labeled: true,
            prediction_kind: PredictionKind::Category,
            text_data: false,
            few_features: true,
            positive_fraction: Some(96.0 / 299.0),
            known_category_count: Some(2),
        }
    }

    fn items(p: &DatasetProfile) -> Vec<AlgorithmKind> {
        recommend(p, &SelectorThresholds::default()).items
    }

    #[test]
    fn heart_failure_queue() {
        assert_eq!(items(&heart()), vec![A::LinearSvc, A::Knn, A::RbfSvc, A::Ensemble, A::ToughLuck]);
    }

    #[test]
    fn large_sample_switches_to_sgd() {
        let p = DatasetProfile { sample_size: 120_000, ..heart() };
        assert_eq!(items(&p), vec![A::SgdClassifier, A::KernelApproximation, A::ToughLuck]);
    }

    #[test]
    fn tiny_sample_needs_more_data() {
        let p = DatasetProfile { sample_size: 10, ..heart() };
        let q = recommend(&p, &SelectorThresholds::default());
        assert_eq!(q.items, vec![A::GetMoreData]);
        assert_eq!(q.rationale.len(), 1);
        assert!(q.rationale[0].contains("min_samples"));
    }

    #[test]
    fn text_classification_uses_naive_bayes() {
        let p = DatasetProfile { text_data: true, ..heart() };
        assert_eq!(items(&p), vec![A::LinearSvc, A::NaiveBayes, A::ToughLuck]);
    }

    #[test]
    fn clustering_branches() {
        let base = DatasetProfile { labeled: false, positive_fraction: None, known_category_count: Some(3), ..heart() };
        assert_eq!(items(&base), vec![A::Kmeans, A::SpectralEmbedding, A::ToughLuck]);
        let big = DatasetProfile { sample_size: 20_000, ..base.clone() };
        assert_eq!(items(&big), vec![A::MinibatchKmeans, A::SpectralEmbedding, A::ToughLuck]);
        let unknown = DatasetProfile { known_category_count: None, ..base.clone() };
        assert_eq!(items(&unknown), vec![A::Meanshift, A::Vbgmm, A::ToughLuck]);
        let unknown_big = DatasetProfile { sample_size: 20_000, ..unknown };
        let q = recommend(&unknown_big, &SelectorThresholds::default());
        assert_eq!(q.items, vec![A::ToughLuck]);
        assert!(q.rationale[0].contains("20000 ≥ 10000"));
    }

    #[test]
    fn regression_branches() {
        let few = DatasetProfile { prediction_kind: PredictionKind::Quantity, positive_fraction: None, ..heart() };
        assert_eq!(items(&few), vec![A::Lasso, A::Elasticnet, A::SvrRbf, A::EnsembleRegressor, A::ToughLuck]);
        let many = DatasetProfile { feature_count: 40, few_features: false, ..few.clone() };
        assert_eq!(items(&many), vec![A::Ridge, A::SvrLinear, A::SvrRbf, A::EnsembleRegressor, A::ToughLuck]);
        let large = DatasetProfile { sample_size: 200_000, ..few };
        assert_eq!(items(&large), vec![A::SgdRegressor, A::ToughLuck]);
    }

    #[test]
    fn dimensionality_reduction_branches() {
        let p = DatasetProfile { prediction_kind: PredictionKind::JustLooking, ..heart() };
        assert_eq!(items(&p), vec![A::RandomizedPca, A::Isomap, A::SpectralEmbedding, A::Lle, A::ToughLuck]);
        let big = DatasetProfile { sample_size: 50_000, ..p };
        assert_eq!(items(&big), vec![A::RandomizedPca, A::KernelApproximation, A::ToughLuck]);
    }

    #[test]
    fn no_prediction_kind_is_tough_luck() {
        let p = DatasetProfile { prediction_kind: PredictionKind::None, ..heart() };
        assert_eq!(items(&p), vec![A::ToughLuck]);
    }

    #[test]
    fn heart_traces() {
        let q = recommend(&heart(), &SelectorThresholds::default());
        let lines = explain(&q);
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "sample_size 299 ≥ 50; prediction=CATEGORY; labeled; 299 < 100000 → LINEAR_SVC");
        assert_eq!(
            lines[1],
            "sample_size 299 ≥ 50; prediction=CATEGORY; labeled; 299 < 100000; LINEAR_SVC not working; not text data → KNN"
        );
        assert!(lines[4].ends_with("ENSEMBLE not working → TOUGH_LUCK"));
        assert_eq!(explain(&q), lines);
    }
}
