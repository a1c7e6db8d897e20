//! CART decision trees, shared by the tree, forest, bagging, and boosting
//! families. Trees serialize as flat node arrays.

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::Task;
use crate::error::Result;

use super::{normalize_scores, ModelSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitCriterion {
    Gini,
    Entropy,
    /// Squared error (variance reduction).
    Mse,
    /// Absolute error around the median.
    Mae,
}

impl SplitCriterion {
    fn for_task(name: &str, task: Task) -> SplitCriterion {
        match (task, name) {
            (Task::Classification, "entropy") => SplitCriterion::Entropy,
            (Task::Classification, _) => SplitCriterion::Gini,
            (Task::Regression, "mae") => SplitCriterion::Mae,
            (Task::Regression, _) => SplitCriterion::Mse,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        /// Class distribution for classification; `[value]` for regression.
        distribution: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub nodes: Vec<TreeNode>,
    /// 0 for regression trees.
    pub n_classes: usize,
}

#[derive(Debug, Clone)]
pub struct TreeParams {
    pub criterion: SplitCriterion,
    pub max_depth: Option<usize>,
    pub min_samples_leaf: usize,
}

impl TreeParams {
    pub fn from_spec(spec: &ModelSpec) -> TreeParams {
        let criterion = SplitCriterion::for_task(&spec.text("criterion", ""), spec.task);
        let max_depth = match spec.int("max_depth", 0) {
            d if d > 0 => Some(d as usize),
            _ => None,
        };
        TreeParams {
            criterion,
            max_depth,
            min_samples_leaf: spec.int("min_samples_leaf", 1).max(1) as usize,
        }
    }

    pub fn regression_stump(max_depth: usize) -> TreeParams {
        TreeParams {
            criterion: SplitCriterion::Mse,
            max_depth: Some(max_depth),
            min_samples_leaf: 1,
        }
    }

    pub fn classification(max_depth: Option<usize>) -> TreeParams {
        TreeParams {
            criterion: SplitCriterion::Gini,
            max_depth,
            min_samples_leaf: 1,
        }
    }
}

pub fn train(spec: &ModelSpec, x: &[Vec<f64>], y: &[f64], n_classes: usize) -> Result<TreeModel> {
    Ok(train_with(
        &TreeParams::from_spec(spec),
        x,
        y,
        None,
        n_classes,
        None,
    ))
}

/// Grow a tree. `weights` are per-sample weights (boosting); `feature_rng`
/// enables per-node feature subsampling of the given size (forests).
pub fn train_with(
    params: &TreeParams,
    x: &[Vec<f64>],
    y: &[f64],
    weights: Option<&[f64]>,
    n_classes: usize,
    feature_rng: Option<(&mut ChaCha8Rng, usize)>,
) -> TreeModel {
    let owned_weights: Vec<f64> = match weights {
        Some(w) => w.to_vec(),
        None => vec![1.0; y.len()],
    };
    let mut builder = TreeBuilder {
        params,
        x,
        y,
        weights: &owned_weights,
        n_classes,
        nodes: Vec::new(),
        feature_rng,
    };
    let indices: Vec<usize> = (0..y.len()).collect();
    builder.build(&indices, 0);
    TreeModel {
        nodes: builder.nodes,
        n_classes,
    }
}

struct TreeBuilder<'a> {
    params: &'a TreeParams,
    x: &'a [Vec<f64>],
    y: &'a [f64],
    weights: &'a [f64],
    n_classes: usize,
    nodes: Vec<TreeNode>,
    feature_rng: Option<(&'a mut ChaCha8Rng, usize)>,
}

impl<'a> TreeBuilder<'a> {
    fn build(&mut self, indices: &[usize], depth: usize) -> usize {
        let at_depth_limit = self
            .params
            .max_depth
            .map(|d| depth >= d)
            .unwrap_or(false);
        if at_depth_limit || indices.len() < 2 || self.is_pure(indices) {
            return self.push_leaf(indices);
        }
        match self.best_split(indices) {
            Some((feature, threshold)) => {
                let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = indices
                    .iter()
                    .partition(|&&i| self.x[i][feature] <= threshold);
                if left_idx.len() < self.params.min_samples_leaf
                    || right_idx.len() < self.params.min_samples_leaf
                {
                    return self.push_leaf(indices);
                }
                let slot = self.nodes.len();
                self.nodes.push(TreeNode::Leaf {
                    distribution: vec![],
                });
                let left = self.build(&left_idx, depth + 1);
                let right = self.build(&right_idx, depth + 1);
                self.nodes[slot] = TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                };
                slot
            }
            None => self.push_leaf(indices),
        }
    }

    fn is_pure(&self, indices: &[usize]) -> bool {
        let first = self.y[indices[0]];
        indices.iter().all(|&i| self.y[i] == first)
    }

    fn push_leaf(&mut self, indices: &[usize]) -> usize {
        let distribution = if self.n_classes > 0 {
            let mut counts = vec![0.0; self.n_classes];
            for &i in indices {
                counts[self.y[i] as usize] += self.weights[i];
            }
            normalize_scores(&mut counts);
            counts
        } else {
            vec![self.leaf_value(indices)]
        };
        self.nodes.push(TreeNode::Leaf { distribution });
        self.nodes.len() - 1
    }

    fn leaf_value(&self, indices: &[usize]) -> f64 {
        match self.params.criterion {
            SplitCriterion::Mae => {
                let mut values: Vec<f64> = indices.iter().map(|&i| self.y[i]).collect();
                values.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let mid = values.len() / 2;
                if values.len() % 2 == 0 {
                    (values[mid - 1] + values[mid]) / 2.0
                } else {
                    values[mid]
                }
            }
            _ => {
                let wsum: f64 = indices.iter().map(|&i| self.weights[i]).sum();
                indices.iter().map(|&i| self.weights[i] * self.y[i]).sum::<f64>() / wsum
            }
        }
    }

    fn candidate_features(&mut self, dim: usize) -> Vec<usize> {
        match &mut self.feature_rng {
            Some((rng, mtry)) => {
                let mut all: Vec<usize> = (0..dim).collect();
                all.shuffle(rng);
                all.truncate((*mtry).max(1));
                all.sort_unstable();
                all
            }
            None => (0..dim).collect(),
        }
    }

    fn best_split(&mut self, indices: &[usize]) -> Option<(usize, f64)> {
        let dim = self.x[indices[0]].len();
        let features = self.candidate_features(dim);
        // (impurity, balance, feature, threshold); ties on impurity go to
        // the more balanced split.
        let mut best: Option<(f64, usize, usize, f64)> = None;
        for feature in features {
            let mut order: Vec<usize> = indices.to_vec();
            order.sort_by(|&a, &b| {
                self.x[a][feature]
                    .partial_cmp(&self.x[b][feature])
                    .unwrap()
                    .then(a.cmp(&b))
            });
            for cut in 1..order.len() {
                let lo = self.x[order[cut - 1]][feature];
                let hi = self.x[order[cut]][feature];
                if lo == hi {
                    continue;
                }
                let threshold = (lo + hi) / 2.0;
                let impurity = self.split_impurity(&order[..cut], &order[cut..]);
                let balance = cut.min(order.len() - cut);
                let better = match best {
                    None => true,
                    Some((bi, bb, _, _)) => {
                        impurity < bi - 1e-15
                            || ((impurity - bi).abs() <= 1e-15 && balance > bb)
                    }
                };
                if better {
                    best = Some((impurity, balance, feature, threshold));
                }
            }
        }
        best.map(|(_, _, f, t)| (f, t))
    }

    /// Weighted total child impurity of a candidate split.
    fn split_impurity(&self, left: &[usize], right: &[usize]) -> f64 {
        self.node_impurity(left) + self.node_impurity(right)
    }

    fn node_impurity(&self, indices: &[usize]) -> f64 {
        match self.params.criterion {
            SplitCriterion::Gini | SplitCriterion::Entropy => {
                let mut counts = vec![0.0; self.n_classes];
                let mut total = 0.0;
                for &i in indices {
                    counts[self.y[i] as usize] += self.weights[i];
                    total += self.weights[i];
                }
                let metric: f64 = counts
                    .iter()
                    .filter(|&&c| c > 0.0)
                    .map(|&c| {
                        let p = c / total;
                        match self.params.criterion {
                            SplitCriterion::Gini => p * (1.0 - p),
                            _ => -p * p.log2(),
                        }
                    })
                    .sum();
                total * metric
            }
            SplitCriterion::Mse => {
                let wsum: f64 = indices.iter().map(|&i| self.weights[i]).sum();
                let mean = indices.iter().map(|&i| self.weights[i] * self.y[i]).sum::<f64>() / wsum;
                indices
                    .iter()
                    .map(|&i| self.weights[i] * (self.y[i] - mean).powi(2))
                    .sum()
            }
            SplitCriterion::Mae => {
                let median = self.leaf_value(indices);
                indices.iter().map(|&i| (self.y[i] - median).abs()).sum()
            }
        }
    }
}

impl TreeModel {
    fn leaf_for(&self, row: &[f64]) -> &[f64] {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[*feature] <= *threshold { *left } else { *right };
                }
                TreeNode::Leaf { distribution } => return distribution,
            }
        }
    }

    pub fn predict_values(&self, x: &[Vec<f64>]) -> Vec<f64> {
        x.iter().map(|row| self.leaf_for(row)[0]).collect()
    }

    pub fn predict_scores(&self, x: &[Vec<f64>]) -> Vec<Vec<f64>> {
        x.iter().map(|row| self.leaf_for(row).to_vec()).collect()
    }
}
