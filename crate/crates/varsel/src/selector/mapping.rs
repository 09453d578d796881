use std::collections::BTreeSet;

use crate::data::{DatasetProfile, PredictionKind};
use crate::dsl::bundled;
use crate::fm::{validate_configuration, ConfigValidity, Configuration, FeatureModel, GroupKind, Variability};
use crate::metrics::MetricId;

use super::{AlgorithmKind, SelectorError, SelectorThresholds};

use AlgorithmKind as A;

/// Feature-model leaf for a metric id.
pub fn metric_leaf(metric: MetricId) -> &'static str {
    match metric {
        MetricId::Accuracy => "Accuracy",
        MetricId::Sensitivity => "Sensitivity",
        MetricId::Specificity => "Specificity",
        MetricId::BalancedAccuracy => "BalancedAccuracy",
        MetricId::F1 => "F1",
        MetricId::Mcc => "MCC",
        MetricId::Eoo => "EOO",
        MetricId::Di => "DI",
        MetricId::Abad => "ABAD",
    }
}

/// Turns queue items into configurations of the bundled selection model.
#[derive(Debug, Clone)]
pub struct ConfigurationMapper {
    pub model: FeatureModel,
    pub thresholds: SelectorThresholds,
}

impl ConfigurationMapper {
    pub fn new(thresholds: SelectorThresholds) -> Self {
        Self { model: bundled::selection_model(), thresholds }
    }

    fn algorithm_leaf(&self, item: AlgorithmKind, profile: &DatasetProfile) -> Option<&'static str> {
        let clustering = profile.prediction_kind == PredictionKind::Category && !profile.labeled;
        let leaf = match item {
            A::LinearSvc => "LinearSVC",
            A::NaiveBayes => "NaiveBayes",
            A::Knn => "KNeighborsClassifier",
            A::RbfSvc => "SVC",
            A::Ensemble => "EnsembleClassifiers",
            A::SgdClassifier => "SGDClassifier",
            A::KernelApproximation if profile.prediction_kind == PredictionKind::JustLooking => "DrKernelApproximation",
            A::KernelApproximation => "ClfKernelApproximation",
            A::Kmeans => "KMeans",
            A::MinibatchKmeans => "MiniBatchKMeans",
            A::Meanshift => "MeanShift",
            A::Vbgmm => "VBGMM",
            A::Lasso => "Lasso",
            A::Elasticnet => "ElasticNet",
            A::Ridge => "RidgeRegression",
            A::SvrLinear => "SVRLinear",
            A::SvrRbf => "SVRRbf",
            A::SgdRegressor => "SGDRegressor",
            A::EnsembleRegressor => "EnsembleRegressors",
            A::RandomizedPca => "RandomizedPCA",
            A::Isomap => "Isomap",
            // The clustering fallback after k-means is spectral clustering.
            A::SpectralEmbedding if clustering => "SpectralClustering",
            A::SpectralEmbedding => "SpectralEmbedding",
            A::Lle => "LLE",
            A::GetMoreData | A::ToughLuck => return None,
        };
        self.model.contains(leaf).then_some(leaf)
    }

    fn sample_band(&self, n: usize) -> &'static str {
        let t = &self.thresholds;
        if n < t.min_samples {
            "InsufficientSample"
        } else if n < t.clustering_large {
            "SmallSample"
        } else if n < t.large_dataset {
            "MediumSample"
        } else {
            "LargeSample"
        }
    }

    /// Selects the algorithm leaf, the dataset requirements the profile
    /// implies and one leaf per metric, closes the selection under the tree
    /// rules and validates it.
    pub fn to_configuration(
        &self,
        item: AlgorithmKind,
        profile: &DatasetProfile,
        metrics: &[MetricId],
    ) -> Result<Configuration, SelectorError> {
        if item.is_terminal() {
            return Err(SelectorError::TerminalPlaceholder(item));
        }
        let leaf = self.algorithm_leaf(item, profile).ok_or(SelectorError::UnmappedAlgorithm(item))?;
        let prediction = match profile.prediction_kind {
            PredictionKind::Category => "PredictCategory",
            PredictionKind::Quantity => "PredictQuantity",
            PredictionKind::JustLooking => "JustLooking",
            PredictionKind::None => return Err(SelectorError::NoPredictionKind),
        };

        let mut seeds = vec![
            leaf,
            self.sample_band(profile.sample_size),
            if profile.labeled { "Labeled" } else { "Unlabeled" },
            if profile.few_features { "FewFeatures" } else { "ManyFeatures" },
            prediction,
        ];
        if profile.text_data {
            seeds.push("TextData");
        }
        if profile.prediction_kind == PredictionKind::Category && profile.known_category_count.is_some() {
            seeds.push("KnownCategoryCount");
        }
        seeds.extend(metrics.iter().map(|&m| metric_leaf(m)));

        let config = self.close(seeds);
        match validate_configuration(&self.model, &config).expect("mapper only selects model features") {
            ConfigValidity::Valid => Ok(config),
            ConfigValidity::Invalid(v) => Err(SelectorError::InvalidConfiguration(v)),
        }
    }

    /// Adds ancestors, mandatory children and, for groups left empty, their
    /// first member until nothing changes.
    fn close(&self, seeds: Vec<&str>) -> Configuration {
        let m = &self.model;
        let mut selected: BTreeSet<&str> = BTreeSet::new();
        for id in seeds {
            selected.insert(id);
            selected.extend(m.ancestors(id));
        }
        loop {
            let mut added = Vec::new();
            for &id in &selected {
                added.extend(
                    m.children_of(id)
                        .filter(|c| c.variability == Variability::Mandatory)
                        .map(|c| c.id.as_str())
                        .filter(|c| !selected.contains(c)),
                );
                for g in m.groups_of(id) {
                    debug_assert!(matches!(g.kind, GroupKind::Or | GroupKind::Alternative));
                    if !g.children.iter().any(|c| selected.contains(c.as_str())) {
                        added.extend(g.children.first().map(String::as_str));
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            selected.extend(added);
        }
        selected.into_iter().collect()
    }
}

impl Default for ConfigurationMapper {
    fn default() -> Self {
        Self::new(SelectorThresholds::default())
    }
}
