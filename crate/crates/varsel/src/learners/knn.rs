use serde::{Deserialize, Serialize};

/// Stored training points; majority vote of the `k` nearest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Knn {
    pub k: usize,
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
}

impl Knn {
    /// Neighbors are ranked by distance, then by label index, then by
    /// training position; vote ties go to the smaller label index.
    pub fn predict(&self, x: &[f64]) -> usize {
        let mut ranked: Vec<(f64, usize, usize)> = self
            .points
            .iter()
            .zip(&self.labels)
            .enumerate()
            .map(|(i, (p, &l))| (p.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum(), l, i))
            .collect();
        ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        let mut votes = [0usize; 2];
        for &(_, l, _) in ranked.iter().take(self.k.max(1)) {
            votes[l] += 1;
        }
        usize::from(votes[1] > votes[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn even_k_tie_goes_to_label_zero() {
        let m = Knn { k: 2, points: vec![vec![0.0], vec![2.0]], labels: vec![1, 0] };
        assert_eq!(m.predict(&[1.0]), 0);
        assert_eq!(m.predict(&[0.1]), 0);
    }

    #[test]
    fn equidistant_cut_prefers_label_zero() {
        let m = Knn { k: 1, points: vec![vec![-1.0], vec![1.0]], labels: vec![1, 0] };
        assert_eq!(m.predict(&[0.0]), 0);
        assert_eq!(m.predict(&[-0.5]), 1);
    }
}
