use serde::{Deserialize, Serialize};

/// Gaussian naive Bayes with per-class means, variances and priors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNb {
    pub log_prior: [f64; 2],
    pub mean: [Vec<f64>; 2],
    pub var: [Vec<f64>; 2],
}

impl GaussianNb {
    /// `var_smoothing` times the largest feature variance is added to every
    /// variance.
    pub fn fit(x: &[Vec<f64>], y: &[usize], var_smoothing: f64) -> Self {
        let d = x.first().map_or(0, Vec::len);
        let mut mean = [vec![0.0; d], vec![0.0; d]];
        let mut var = [vec![0.0; d], vec![0.0; d]];
        let mut count = [0usize; 2];
        for (xi, &c) in x.iter().zip(y) {
            count[c] += 1;
            for (m, v) in mean[c].iter_mut().zip(xi) {
                *m += v;
            }
        }
        for c in 0..2 {
            for m in &mut mean[c] {
                *m /= count[c].max(1) as f64;
            }
        }
        for (xi, &c) in x.iter().zip(y) {
            for ((s, v), m) in var[c].iter_mut().zip(xi).zip(&mean[c]) {
                *s += (v - m).powi(2);
            }
        }
        let n = x.len().max(1) as f64;
        let overall: Vec<f64> = (0..d)
            .map(|j| {
                let mu = x.iter().map(|r| r[j]).sum::<f64>() / n;
                x.iter().map(|r| (r[j] - mu).powi(2)).sum::<f64>() / n
            })
            .collect();
        let eps = var_smoothing * overall.iter().copied().fold(0.0, f64::max).max(1e-300);
        for c in 0..2 {
            for s in &mut var[c] {
                *s = *s / count[c].max(1) as f64 + eps;
            }
        }
        let log_prior = [(count[0] as f64 / n).ln(), (count[1] as f64 / n).ln()];
        GaussianNb { log_prior, mean, var }
    }

    fn log_joint(&self, c: usize, x: &[f64]) -> f64 {
        self.log_prior[c]
            + x.iter()
                .zip(&self.mean[c])
                .zip(&self.var[c])
                .map(|((v, m), s)| -0.5 * ((2.0 * std::f64::consts::PI * s).ln() + (v - m).powi(2) / s))
                .sum::<f64>()
    }

    /// Ties go to class 0.
    pub fn predict(&self, x: &[f64]) -> usize {
        usize::from(self.log_joint(1, x) > self.log_joint(0, x))
    }
}
