use serde::{Deserialize, Serialize};

use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum Node {
    Leaf {
        class: usize,
    },
    /// `x[feature] <= threshold` goes left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// A binary decision tree stored as a node arena; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

#[derive(Debug, Clone, Copy)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_samples_split: usize,
}

fn gini(counts: [usize; 2]) -> f64 {
    let n = (counts[0] + counts[1]) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let (p0, p1) = (counts[0] as f64 / n, counts[1] as f64 / n);
    1.0 - p0 * p0 - p1 * p1
}

fn majority(counts: [usize; 2]) -> usize {
    usize::from(counts[1] > counts[0])
}

/// Lowest weighted child Gini over every feature and every midpoint between
/// consecutive distinct values. Earlier features and smaller thresholds win
/// ties. Returns `(feature, threshold)`.
#[allow(clippy::needless_range_loop)]
pub fn best_split(x: &[Vec<f64>], y: &[usize], rows: &[usize]) -> Option<(usize, f64)> {
    let d = x.first().map_or(0, Vec::len);
    let n = rows.len();
    let mut total = [0usize; 2];
    for &r in rows {
        total[y[r]] += 1;
    }
    let mut best: Option<(f64, usize, f64)> = None;
    let mut sorted = rows.to_vec();
    for f in 0..d {
        sorted.sort_by(|&a, &b| x[a][f].total_cmp(&x[b][f]));
        let mut left = [0usize; 2];
        for k in 0..n - 1 {
            left[y[sorted[k]]] += 1;
            let (lo, hi) = (x[sorted[k]][f], x[sorted[k + 1]][f]);
            if lo == hi {
                continue;
            }
            let right = [total[0] - left[0], total[1] - left[1]];
            let nl = (k + 1) as f64;
            let score = (nl * gini(left) + (n as f64 - nl) * gini(right)) / n as f64;
            if best.is_none_or(|(s, _, _)| score < s) {
                best = Some((score, f, lo + (hi - lo) / 2.0));
            }
        }
    }
    best.map(|(_, f, t)| (f, t))
}

impl Tree {
    pub fn fit(x: &[Vec<f64>], y: &[usize], rows: &[usize], params: TreeParams) -> Self {
        let mut tree = Tree { nodes: Vec::new() };
        tree.grow(x, y, rows.to_vec(), 0, params);
        tree
    }

    fn grow(&mut self, x: &[Vec<f64>], y: &[usize], rows: Vec<usize>, depth: usize, p: TreeParams) -> usize {
        let id = self.nodes.len();
        let mut counts = [0usize; 2];
        for &r in &rows {
            counts[y[r]] += 1;
        }
        self.nodes.push(Node::Leaf { class: majority(counts) });
        let pure = counts[0] == 0 || counts[1] == 0;
        if pure || depth >= p.max_depth || rows.len() < p.min_samples_split.max(2) {
            return id;
        }
        let Some((feature, threshold)) = best_split(x, y, &rows) else { return id };
        let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| x[i][feature] <= threshold);
        let left = self.grow(x, y, l, depth + 1, p);
        let right = self.grow(x, y, r, depth + 1, p);
        self.nodes[id] = Node::Split { feature, threshold, left, right };
        id
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                Node::Leaf { class } => return class,
                Node::Split { feature, threshold, left, right } => {
                    at = if x[feature] <= threshold { left } else { right };
                }
            }
        }
    }
}

/// Bagged decision trees with a majority vote; ties go to class 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub trees: Vec<Tree>,
}

impl Forest {
    pub fn fit(
        x: &[Vec<f64>],
        y: &[usize],
        n_trees: usize,
        bootstrap: bool,
        params: TreeParams,
        rng: &mut SplitMix64,
    ) -> Self {
        let n = x.len();
        let trees = (0..n_trees)
            .map(|_| {
                let rows: Vec<usize> =
                    if bootstrap { (0..n).map(|_| rng.below(n)).collect() } else { (0..n).collect() };
                Tree::fit(x, y, &rows, params)
            })
            .collect();
        Forest { trees }
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        let ones = self.trees.iter().filter(|t| t.predict(x) == 1).count();
        usize::from(2 * ones > self.trees.len())
    }
}
