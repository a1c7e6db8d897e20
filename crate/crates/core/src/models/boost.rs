//! Tree ensembles: bagged forests, AdaBoost, and gradient boosting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::tree::{train_with, TreeModel, TreeParams};
use super::{argmax_label, normalize_scores, ModelSpec};

fn bootstrap_indices(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    (0..n).map(|_| rng.gen_range(0..n)).collect()
}

fn gather(x: &[Vec<f64>], y: &[f64], indices: &[usize]) -> (Vec<Vec<f64>>, Vec<f64>) {
    (
        indices.iter().map(|&i| x[i].clone()).collect(),
        indices.iter().map(|&i| y[i]).collect(),
    )
}

/// Bagged trees; covers both the random-forest and bagging families.
/// Diversity comes from the bootstrap resample (feature subsampling is
/// off by default so a bootstrap-free forest reduces to its base tree).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<TreeModel>,
    pub bootstrap: bool,
}

pub fn train_forest(
    spec: &ModelSpec,
    x: &[Vec<f64>],
    y: &[f64],
    n_classes: usize,
) -> Result<ForestModel> {
    let n_estimators = spec.int("n_estimators", 100).max(1) as usize;
    let bootstrap = spec.flag("bootstrap", true);
    let params = TreeParams::from_spec(spec);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let trees = (0..n_estimators)
        .map(|_| {
            if bootstrap {
                let sample = bootstrap_indices(y.len(), &mut rng);
                let (bx, by) = gather(x, y, &sample);
                train_with(&params, &bx, &by, None, n_classes, None)
            } else {
                train_with(&params, x, y, None, n_classes, None)
            }
        })
        .collect();
    Ok(ForestModel { trees, bootstrap })
}

impl ForestModel {
    pub fn predict_values(&self, x: &[Vec<f64>]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        for tree in &self.trees {
            for (acc, v) in out.iter_mut().zip(tree.predict_values(x)) {
                *acc += v;
            }
        }
        for v in &mut out {
            *v /= self.trees.len() as f64;
        }
        out
    }

    pub fn predict_scores(&self, x: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n_classes = self.trees[0].n_classes;
        let mut out = vec![vec![0.0; n_classes]; x.len()];
        for tree in &self.trees {
            for (acc, row) in out.iter_mut().zip(tree.predict_scores(x)) {
                for (a, v) in acc.iter_mut().zip(row) {
                    *a += v;
                }
            }
        }
        for row in &mut out {
            normalize_scores(row);
        }
        out
    }
}

/// SAMME AdaBoost over shallow trees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaboostClassifier {
    pub stages: Vec<(TreeModel, f64)>,
    pub n_classes: usize,
}

pub fn train_adaboost_classifier(
    spec: &ModelSpec,
    x: &[Vec<f64>],
    y: &[f64],
    n_classes: usize,
) -> Result<AdaboostClassifier> {
    let n_estimators = spec.int("n_estimators", 50).max(1) as usize;
    let depth = spec.int("base_depth", 1).max(1) as usize;
    let params = TreeParams::classification(Some(depth));
    let n = y.len();
    let mut weights = vec![1.0 / n as f64; n];
    let mut stages = Vec::new();
    let k = n_classes as f64;

    for _ in 0..n_estimators {
        let tree = train_with(&params, x, y, Some(&weights), n_classes, None);
        let predictions: Vec<usize> = tree
            .predict_scores(x)
            .iter()
            .map(|s| argmax_label(s))
            .collect();
        let err: f64 = predictions
            .iter()
            .zip(y)
            .zip(&weights)
            .filter(|((&p, &t), _)| p as f64 != t)
            .map(|(_, &w)| w)
            .sum();
        if err <= 1e-12 {
            stages.push((tree, 10.0)); // perfect stage dominates
            break;
        }
        if err >= 1.0 - 1.0 / k {
            if stages.is_empty() {
                stages.push((tree, 1.0));
            }
            break;
        }
        let alpha = ((1.0 - err) / err).ln() + (k - 1.0).ln();
        for ((w, &p), &t) in weights.iter_mut().zip(&predictions).zip(y) {
            if p as f64 != t {
                *w *= alpha.exp();
            }
        }
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        stages.push((tree, alpha));
    }

    Ok(AdaboostClassifier { stages, n_classes })
}

impl AdaboostClassifier {
    pub fn predict_scores(&self, x: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let mut out = vec![vec![0.0; self.n_classes]; x.len()];
        for (tree, alpha) in &self.stages {
            for (acc, scores) in out.iter_mut().zip(tree.predict_scores(x)) {
                acc[argmax_label(&scores)] += alpha;
            }
        }
        for row in &mut out {
            normalize_scores(row);
        }
        out
    }
}

/// AdaBoost.R2 with linear loss over depth-3 trees; predictions use the
/// weighted median of the stage outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaboostRegressor {
    pub stages: Vec<(TreeModel, f64)>,
}

pub fn train_adaboost_regressor(
    spec: &ModelSpec,
    x: &[Vec<f64>],
    y: &[f64],
) -> Result<AdaboostRegressor> {
    let n_estimators = spec.int("n_estimators", 50).max(1) as usize;
    let depth = spec.int("base_depth", 3).max(1) as usize;
    let params = TreeParams::regression_stump(depth);
    let n = y.len();
    let mut weights = vec![1.0 / n as f64; n];
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut stages = Vec::new();

    for _ in 0..n_estimators {
        // Weighted bootstrap resample.
        let cumulative: Vec<f64> = weights
            .iter()
            .scan(0.0, |acc, w| {
                *acc += w;
                Some(*acc)
            })
            .collect();
        let total = *cumulative.last().unwrap();
        let sample: Vec<usize> = (0..n)
            .map(|_| {
                let target = rng.gen::<f64>() * total;
                cumulative.partition_point(|&c| c < target).min(n - 1)
            })
            .collect();
        let (bx, by) = gather(x, y, &sample);
        let tree = train_with(&params, &bx, &by, None, 0, None);

        let predictions = tree.predict_values(x);
        let abs_errors: Vec<f64> = predictions.iter().zip(y).map(|(p, t)| (p - t).abs()).collect();
        let max_err = abs_errors.iter().cloned().fold(0.0, f64::max);
        if max_err <= 1e-12 {
            stages.push((tree, 10.0));
            break;
        }
        let losses: Vec<f64> = abs_errors.iter().map(|e| e / max_err).collect();
        let avg_loss: f64 = losses.iter().zip(&weights).map(|(l, w)| l * w).sum();
        if avg_loss >= 0.5 {
            if stages.is_empty() {
                stages.push((tree, 1.0));
            }
            break;
        }
        let beta = avg_loss / (1.0 - avg_loss);
        let alpha = (1.0 / beta).ln();
        for (w, l) in weights.iter_mut().zip(&losses) {
            *w *= beta.powf(1.0 - l);
        }
        let wsum: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= wsum;
        }
        stages.push((tree, alpha));
    }

    Ok(AdaboostRegressor { stages })
}

impl AdaboostRegressor {
    pub fn predict_values(&self, x: &[Vec<f64>]) -> Vec<f64> {
        let stage_preds: Vec<Vec<f64>> = self
            .stages
            .iter()
            .map(|(tree, _)| tree.predict_values(x))
            .collect();
        (0..x.len())
            .map(|row| {
                let mut pairs: Vec<(f64, f64)> = self
                    .stages
                    .iter()
                    .enumerate()
                    .map(|(s, (_, alpha))| (stage_preds[s][row], *alpha))
                    .collect();
                pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
                let total: f64 = pairs.iter().map(|(_, a)| a).sum();
                let mut acc = 0.0;
                for (value, alpha) in &pairs {
                    acc += alpha;
                    if acc >= total / 2.0 {
                        return *value;
                    }
                }
                pairs.last().unwrap().0
            })
            .collect()
    }
}

/// Least-squares gradient boosting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientBoostRegressor {
    pub init: f64,
    pub learning_rate: f64,
    pub trees: Vec<TreeModel>,
}

pub fn train_gradient_boost_regressor(
    spec: &ModelSpec,
    x: &[Vec<f64>],
    y: &[f64],
) -> Result<GradientBoostRegressor> {
    let n_estimators = spec.int("n_estimators", 100).max(1) as usize;
    let learning_rate = spec.float("learning_rate", 0.1);
    let depth = spec.int("base_depth", 3).max(1) as usize;
    let params = TreeParams::regression_stump(depth);
    let init = y.iter().sum::<f64>() / y.len() as f64;
    let mut residuals: Vec<f64> = y.iter().map(|t| t - init).collect();
    let mut trees = Vec::with_capacity(n_estimators);
    for _ in 0..n_estimators {
        let tree = train_with(&params, x, &residuals, None, 0, None);
        let step = tree.predict_values(x);
        for (r, s) in residuals.iter_mut().zip(&step) {
            *r -= learning_rate * s;
        }
        trees.push(tree);
    }
    Ok(GradientBoostRegressor {
        init,
        learning_rate,
        trees,
    })
}

impl GradientBoostRegressor {
    pub fn predict_values(&self, x: &[Vec<f64>]) -> Vec<f64> {
        let mut out = vec![self.init; x.len()];
        for tree in &self.trees {
            for (acc, v) in out.iter_mut().zip(tree.predict_values(x)) {
                *acc += self.learning_rate * v;
            }
        }
        out
    }
}

/// Gradient boosting for classification: one-vs-rest logistic boosting, one
/// booster per class, with softmax-normalized scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientBoostClassifier {
    pub per_class: Vec<BinaryLogitBooster>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinaryLogitBooster {
    pub init: f64,
    pub learning_rate: f64,
    pub trees: Vec<TreeModel>,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

fn train_binary_logit_booster(
    x: &[Vec<f64>],
    targets: &[f64],
    n_estimators: usize,
    learning_rate: f64,
    depth: usize,
) -> BinaryLogitBooster {
    let params = TreeParams::regression_stump(depth);
    let positive = targets.iter().filter(|&&t| t > 0.5).count() as f64;
    let p0 = (positive / targets.len() as f64).clamp(1e-6, 1.0 - 1e-6);
    let init = (p0 / (1.0 - p0)).ln();
    let mut raw = vec![init; targets.len()];
    let mut trees = Vec::with_capacity(n_estimators);
    for _ in 0..n_estimators {
        let gradients: Vec<f64> = raw
            .iter()
            .zip(targets)
            .map(|(&z, &t)| t - sigmoid(z))
            .collect();
        let tree = train_with(&params, x, &gradients, None, 0, None);
        for (z, s) in raw.iter_mut().zip(tree.predict_values(x)) {
            *z += learning_rate * s;
        }
        trees.push(tree);
    }
    BinaryLogitBooster {
        init,
        learning_rate,
        trees,
    }
}

pub fn train_gradient_boost_classifier(
    spec: &ModelSpec,
    x: &[Vec<f64>],
    y: &[f64],
    n_classes: usize,
) -> Result<GradientBoostClassifier> {
    let n_estimators = spec.int("n_estimators", 100).max(1) as usize;
    let learning_rate = spec.float("learning_rate", 0.1);
    let depth = spec.int("base_depth", 3).max(1) as usize;
    let per_class = (0..n_classes)
        .map(|c| {
            let targets: Vec<f64> = y.iter().map(|&t| if t as usize == c { 1.0 } else { 0.0 }).collect();
            train_binary_logit_booster(x, &targets, n_estimators, learning_rate, depth)
        })
        .collect();
    Ok(GradientBoostClassifier { per_class })
}

impl BinaryLogitBooster {
    fn raw_scores(&self, x: &[Vec<f64>]) -> Vec<f64> {
        let mut out = vec![self.init; x.len()];
        for tree in &self.trees {
            for (acc, v) in out.iter_mut().zip(tree.predict_values(x)) {
                *acc += self.learning_rate * v;
            }
        }
        out
    }
}

impl GradientBoostClassifier {
    pub fn predict_scores(&self, x: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let raw: Vec<Vec<f64>> = self.per_class.iter().map(|b| b.raw_scores(x)).collect();
        (0..x.len())
            .map(|row| {
                let mut scores: Vec<f64> = raw.iter().map(|r| sigmoid(r[row])).collect();
                normalize_scores(&mut scores);
                scores
            })
            .collect()
    }
}
