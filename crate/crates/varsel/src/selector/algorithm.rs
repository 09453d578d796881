use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Estimators reachable from the selection heuristics, plus the two
/// terminal placeholders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AlgorithmKind {
    LinearSvc,
    NaiveBayes,
    Knn,
    RbfSvc,
    Ensemble,
    SgdClassifier,
    KernelApproximation,
    Kmeans,
    MinibatchKmeans,
    Meanshift,
    Vbgmm,
    Lasso,
    Elasticnet,
    Ridge,
    SvrLinear,
    SvrRbf,
    SgdRegressor,
    EnsembleRegressor,
    RandomizedPca,
    Isomap,
    SpectralEmbedding,
    Lle,
    GetMoreData,
    ToughLuck,
}

impl AlgorithmKind {
    pub const ALL: [AlgorithmKind; 24] = [
        AlgorithmKind::LinearSvc,
        AlgorithmKind::NaiveBayes,
        AlgorithmKind::Knn,
        AlgorithmKind::RbfSvc,
        AlgorithmKind::Ensemble,
        AlgorithmKind::SgdClassifier,
        AlgorithmKind::KernelApproximation,
        AlgorithmKind::Kmeans,
        AlgorithmKind::MinibatchKmeans,
        AlgorithmKind::Meanshift,
        AlgorithmKind::Vbgmm,
        AlgorithmKind::Lasso,
        AlgorithmKind::Elasticnet,
        AlgorithmKind::Ridge,
        AlgorithmKind::SvrLinear,
        AlgorithmKind::SvrRbf,
        AlgorithmKind::SgdRegressor,
        AlgorithmKind::EnsembleRegressor,
        AlgorithmKind::RandomizedPca,
        AlgorithmKind::Isomap,
        AlgorithmKind::SpectralEmbedding,
        AlgorithmKind::Lle,
        AlgorithmKind::GetMoreData,
        AlgorithmKind::ToughLuck,
    ];

    /// GET_MORE_DATA and TOUGH_LUCK end a queue and are never trained.
    pub fn is_terminal(self) -> bool {
        matches!(self, AlgorithmKind::GetMoreData | AlgorithmKind::ToughLuck)
    }

    /// Kinds the in-house learners can train (binary classification).
    pub fn is_trainable(self) -> bool {
        matches!(
            self,
            AlgorithmKind::LinearSvc
                | AlgorithmKind::Knn
                | AlgorithmKind::RbfSvc
                | AlgorithmKind::Ensemble
                | AlgorithmKind::SgdClassifier
                | AlgorithmKind::NaiveBayes
        )
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AlgorithmKind::LinearSvc => "LINEAR_SVC",
            AlgorithmKind::NaiveBayes => "NAIVE_BAYES",
            AlgorithmKind::Knn => "KNN",
            AlgorithmKind::RbfSvc => "RBF_SVC",
            AlgorithmKind::Ensemble => "ENSEMBLE",
            AlgorithmKind::SgdClassifier => "SGD_CLASSIFIER",
            AlgorithmKind::KernelApproximation => "KERNEL_APPROXIMATION",
            AlgorithmKind::Kmeans => "KMEANS",
            AlgorithmKind::MinibatchKmeans => "MINIBATCH_KMEANS",
            AlgorithmKind::Meanshift => "MEANSHIFT",
            AlgorithmKind::Vbgmm => "VBGMM",
            AlgorithmKind::Lasso => "LASSO",
            AlgorithmKind::Elasticnet => "ELASTICNET",
            AlgorithmKind::Ridge => "RIDGE",
            AlgorithmKind::SvrLinear => "SVR_LINEAR",
            AlgorithmKind::SvrRbf => "SVR_RBF",
            AlgorithmKind::SgdRegressor => "SGD_REGRESSOR",
            AlgorithmKind::EnsembleRegressor => "ENSEMBLE_REGRESSOR",
            AlgorithmKind::RandomizedPca => "RANDOMIZED_PCA",
            AlgorithmKind::Isomap => "ISOMAP",
            AlgorithmKind::SpectralEmbedding => "SPECTRAL_EMBEDDING",
            AlgorithmKind::Lle => "LLE",
            AlgorithmKind::GetMoreData => "GET_MORE_DATA",
            AlgorithmKind::ToughLuck => "TOUGH_LUCK",
        }
    }
}

impl fmt::Display for AlgorithmKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AlgorithmKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let want = s.trim().to_ascii_uppercase();
        AlgorithmKind::ALL.into_iter().find(|k| k.as_str() == want).ok_or_else(|| format!("unknown algorithm '{s}'"))
    }
}
