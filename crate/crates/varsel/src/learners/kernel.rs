use serde::{Deserialize, Serialize};

use crate::rng::SplitMix64;

use super::linear::class_weights;

fn rbf(gamma: f64, a: &[f64], b: &[f64]) -> f64 {
    (-gamma * a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>()).exp()
}

/// RBF-kernel SVM trained by kernelized Pegasos. The decision function is
/// `scale * sum_j coef_j K(x_j, x)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSvm {
    pub gamma: f64,
    pub scale: f64,
    pub support: Vec<Vec<f64>>,
    pub coef: Vec<f64>,
}

impl KernelSvm {
    pub fn fit(
        x: &[Vec<f64>],
        y: &[usize],
        lambda: f64,
        gamma: f64,
        epochs: usize,
        balanced: bool,
        rng: &mut SplitMix64,
    ) -> Self {
        let n = x.len();
        let c = class_weights(y, balanced);
        let s: Vec<f64> = y.iter().map(|&l| if l == 1 { 1.0 } else { -1.0 }).collect();
        let gram: Vec<Vec<f64>> = x.iter().map(|a| x.iter().map(|b| rbf(gamma, a, b)).collect()).collect();
        let mut alpha = vec![0.0; n];
        let steps = epochs * n;
        for t in 1..=steps {
            let i = rng.below(n);
            let f: f64 = (0..n).filter(|&j| alpha[j] != 0.0).map(|j| alpha[j] * s[j] * gram[j][i]).sum();
            if s[i] * f / (lambda * t as f64) < 1.0 {
                alpha[i] += c[i];
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&j| alpha[j] != 0.0).collect();
        KernelSvm {
            gamma,
            scale: 1.0 / (lambda * steps.max(1) as f64),
            support: keep.iter().map(|&j| x[j].clone()).collect(),
            coef: keep.iter().map(|&j| alpha[j] * s[j]).collect(),
        }
    }

    pub fn decision(&self, x: &[f64]) -> f64 {
        self.scale * self.support.iter().zip(&self.coef).map(|(sv, a)| a * rbf(self.gamma, sv, x)).sum::<f64>()
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        usize::from(self.decision(x) > 0.0)
    }
}
