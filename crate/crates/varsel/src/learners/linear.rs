use serde::{Deserialize, Serialize};

use crate::rng::SplitMix64;

/// Per-sample weights: 1, or `n / (2 n_c)` for balanced class weighting.
pub(crate) fn class_weights(y: &[usize], balanced: bool) -> Vec<f64> {
    if !balanced {
        return vec![1.0; y.len()];
    }
    let n1 = y.iter().filter(|&&c| c == 1).count();
    let counts = [y.len() - n1, n1];
    y.iter().map(|&c| y.len() as f64 / (2.0 * counts[c] as f64)).collect()
}

fn sign(c: usize) -> f64 {
    if c == 1 {
        1.0
    } else {
        -1.0
    }
}

fn dot(w: &[f64], x: &[f64]) -> f64 {
    w.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// A separating hyperplane; class 1 when `w·x + b > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Linear {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl Linear {
    /// L2-regularized hinge loss, full-batch subgradient descent with step
    /// `1/(lambda t)`.
    pub fn fit_svm(x: &[Vec<f64>], y: &[usize], lambda: f64, epochs: usize, balanced: bool) -> Self {
        let d = x.first().map_or(0, Vec::len);
        let c = class_weights(y, balanced);
        let n = x.len() as f64;
        let mut w = vec![0.0; d];
        let mut b = 0.0;
        for t in 1..=epochs {
            let eta = 1.0 / (lambda * t as f64);
            let mut gw = vec![0.0; d];
            let mut gb = 0.0;
            for (i, xi) in x.iter().enumerate() {
                let yi = sign(y[i]);
                if yi * (dot(&w, xi) + b) < 1.0 {
                    for (g, v) in gw.iter_mut().zip(xi) {
                        *g += c[i] * yi * v;
                    }
                    gb += c[i] * yi;
                }
            }
            for (wj, gj) in w.iter_mut().zip(&gw) {
                *wj = (1.0 - eta * lambda) * *wj + eta * gj / n;
            }
            b += eta * gb / n;
        }
        Linear { weights: w, bias: b }
    }

    /// Logistic loss with L2 penalty `alpha`, per-sample updates over a
    /// seeded shuffle each epoch.
    pub fn fit_logistic(
        x: &[Vec<f64>],
        y: &[usize],
        alpha: f64,
        eta0: f64,
        epochs: usize,
        balanced: bool,
        rng: &mut SplitMix64,
    ) -> Self {
        let d = x.first().map_or(0, Vec::len);
        let c = class_weights(y, balanced);
        let mut w = vec![0.0; d];
        let mut b = 0.0;
        let mut order: Vec<usize> = (0..x.len()).collect();
        for _ in 0..epochs {
            rng.shuffle(&mut order);
            for &i in &order {
                let z = dot(&w, &x[i]) + b;
                let p = 1.0 / (1.0 + (-z).exp());
                let g = c[i] * (p - y[i] as f64);
                for (wj, xj) in w.iter_mut().zip(&x[i]) {
                    *wj -= eta0 * (g * xj + alpha * *wj);
                }
                b -= eta0 * g;
            }
        }
        Linear { weights: w, bias: b }
    }

    pub fn decision(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x) + self.bias
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        usize::from(self.decision(x) > 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_weights_sum_to_n() {
        let y = [0, 0, 0, 1];
        let c = class_weights(&y, true);
        assert!((c.iter().sum::<f64>() - 4.0).abs() < 1e-12);
        assert_eq!(c[3], 2.0);
    }

    #[test]
    fn separates_a_line() {
        let x: Vec<Vec<f64>> = (-5..=5).filter(|&i| i != 0).map(|i| vec![i as f64]).collect();
        let y: Vec<usize> = (-5..=5).filter(|&i| i != 0).map(|i| usize::from(i > 0)).collect();
        let m = Linear::fit_svm(&x, &y, 0.01, 200, false);
        assert!(x.iter().zip(&y).all(|(xi, &yi)| m.predict(xi) == yi));
        let m = Linear::fit_logistic(&x, &y, 1e-4, 0.05, 50, false, &mut SplitMix64::new(3));
        assert!(x.iter().zip(&y).all(|(xi, &yi)| m.predict(xi) == yi));
    }
}
