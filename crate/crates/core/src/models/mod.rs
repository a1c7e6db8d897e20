//! The supervised model zoo explored per property group.
//!
//! Every learner is deterministic given its spec (seed included), and every
//! fitted model serializes to JSON for the ensemble bundle.

mod boost;
mod grid;
mod knn;
mod linear;
mod nb;
mod svm;
mod tree;

pub use grid::enumerate_model_grid;
pub use knn::{DistanceMetric, KnnModel, KnnWeights};
pub use tree::{SplitCriterion, TreeModel};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dataset::Task;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Knn,
    DecisionTree,
    RandomForest,
    Bagging,
    Adaboost,
    GradientBoosting,
    GaussianNb,
    BernoulliNb,
    Linear,
    SvmLinear,
}

/// A hyperparameter value; kept loosely typed so specs serialize as plain
/// JSON maps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Bool(bool),
    Int(i64),
    Float(f64),
    Text(String),
}

/// An algorithm family plus concrete hyperparameters for one task.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub family: Family,
    pub task: Task,
    pub hyperparameters: BTreeMap<String, ParamValue>,
    pub seed: u64,
}

impl ModelSpec {
    pub fn new(family: Family, task: Task, seed: u64) -> Self {
        ModelSpec {
            family,
            task,
            hyperparameters: BTreeMap::new(),
            seed,
        }
    }

    pub fn with(mut self, name: &str, value: ParamValue) -> Self {
        self.hyperparameters.insert(name.to_string(), value);
        self
    }

    pub fn int(&self, name: &str, default: i64) -> i64 {
        match self.hyperparameters.get(name) {
            Some(ParamValue::Int(v)) => *v,
            Some(ParamValue::Float(v)) => *v as i64,
            _ => default,
        }
    }

    pub fn float(&self, name: &str, default: f64) -> f64 {
        match self.hyperparameters.get(name) {
            Some(ParamValue::Float(v)) => *v,
            Some(ParamValue::Int(v)) => *v as f64,
            _ => default,
        }
    }

    pub fn text(&self, name: &str, default: &str) -> String {
        match self.hyperparameters.get(name) {
            Some(ParamValue::Text(v)) => v.clone(),
            _ => default.to_string(),
        }
    }

    pub fn flag(&self, name: &str, default: bool) -> bool {
        match self.hyperparameters.get(name) {
            Some(ParamValue::Bool(v)) => *v,
            _ => default,
        }
    }

    /// A short human-readable identifier, e.g. `knn(k=3,metric=euclidean)`.
    pub fn label(&self) -> String {
        let params: Vec<String> = self
            .hyperparameters
            .iter()
            .map(|(k, v)| {
                let v = match v {
                    ParamValue::Bool(b) => b.to_string(),
                    ParamValue::Int(i) => i.to_string(),
                    ParamValue::Float(f) => format!("{}", f),
                    ParamValue::Text(t) => t.clone(),
                };
                format!("{}={}", k, v)
            })
            .collect();
        format!("{:?}({})", self.family, params.join(",")).to_lowercase()
    }
}

/// The serializable fitted state behind a [`TrainedModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FittedModel {
    Knn(knn::KnnModel),
    Tree(tree::TreeModel),
    Forest(boost::ForestModel),
    AdaboostClassifier(boost::AdaboostClassifier),
    AdaboostRegressor(boost::AdaboostRegressor),
    GradientBoostRegressor(boost::GradientBoostRegressor),
    GradientBoostClassifier(boost::GradientBoostClassifier),
    GaussianNb(nb::GaussianNb),
    BernoulliNb(nb::BernoulliNb),
    Ridge(linear::RidgeModel),
    Logistic(linear::LogisticModel),
    SvmClassifier(svm::SvmClassifier),
    SvmRegressor(svm::SvmRegressor),
}

/// A fitted predictor plus the spec that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub spec: ModelSpec,
    pub train_feature_dim: usize,
    /// 0 for regression models.
    pub n_classes: usize,
    pub fitted: FittedModel,
}

/// Predictions of one model on a feature batch.
#[derive(Debug, Clone, PartialEq)]
pub enum Predictions {
    Regression(Vec<f64>),
    /// Class ids plus per-row score vectors normalized to sum 1.
    Classification {
        labels: Vec<usize>,
        scores: Vec<Vec<f64>>,
    },
}

impl Predictions {
    pub fn regression(&self) -> &[f64] {
        match self {
            Predictions::Regression(v) => v,
            _ => panic!("expected regression predictions"),
        }
    }

    pub fn labels(&self) -> &[usize] {
        match self {
            Predictions::Classification { labels, .. } => labels,
            _ => panic!("expected classification predictions"),
        }
    }
}

/// Argmax with ties broken by the lowest class id.
pub(crate) fn argmax_label(scores: &[f64]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

/// Normalize a non-negative score vector to sum 1 (uniform if all zero).
pub(crate) fn normalize_scores(scores: &mut [f64]) {
    let total: f64 = scores.iter().sum();
    if total > 0.0 {
        for s in scores.iter_mut() {
            *s /= total;
        }
    } else {
        let u = 1.0 / scores.len() as f64;
        for s in scores.iter_mut() {
            *s = u;
        }
    }
}

fn validate_training_input(spec: &ModelSpec, x: &[Vec<f64>], y: &[f64]) -> Result<usize> {
    if x.is_empty() || x.len() != y.len() {
        return Err(Error::DegenerateTrainingData(format!(
            "{} feature rows vs {} targets",
            x.len(),
            y.len()
        )));
    }
    let dim = x[0].len();
    if dim == 0 || x.iter().any(|r| r.len() != dim) {
        return Err(Error::DegenerateTrainingData(
            "inconsistent feature dimensions".into(),
        ));
    }
    if spec.task == Task::Classification {
        let first = y[0];
        if y.iter().all(|&t| t == first) {
            return Err(Error::DegenerateTrainingData(
                "single-class training set".into(),
            ));
        }
    }
    Ok(dim)
}

fn class_count(y: &[f64]) -> usize {
    y.iter().map(|&t| t as usize).max().unwrap_or(0) + 1
}

/// Fit the learner described by `spec` on a standardized feature matrix.
pub fn train_model(spec: &ModelSpec, x: &[Vec<f64>], y: &[f64]) -> Result<TrainedModel> {
    let dim = validate_training_input(spec, x, y)?;
    let n_classes = match spec.task {
        Task::Classification => class_count(y),
        Task::Regression => 0,
    };
    let fitted = match spec.family {
        Family::Knn => FittedModel::Knn(knn::train(spec, x, y)?),
        Family::DecisionTree => FittedModel::Tree(tree::train(spec, x, y, n_classes)?),
        Family::RandomForest | Family::Bagging => {
            FittedModel::Forest(boost::train_forest(spec, x, y, n_classes)?)
        }
        Family::Adaboost => match spec.task {
            Task::Classification => {
                FittedModel::AdaboostClassifier(boost::train_adaboost_classifier(spec, x, y, n_classes)?)
            }
            Task::Regression => {
                FittedModel::AdaboostRegressor(boost::train_adaboost_regressor(spec, x, y)?)
            }
        },
        Family::GradientBoosting => match spec.task {
            Task::Classification => FittedModel::GradientBoostClassifier(
                boost::train_gradient_boost_classifier(spec, x, y, n_classes)?,
            ),
            Task::Regression => {
                FittedModel::GradientBoostRegressor(boost::train_gradient_boost_regressor(spec, x, y)?)
            }
        },
        Family::GaussianNb => {
            if spec.task != Task::Classification {
                return Err(Error::InvalidArgument(
                    "gaussian_nb supports classification only".into(),
                ));
            }
            FittedModel::GaussianNb(nb::train_gaussian(x, y, n_classes)?)
        }
        Family::BernoulliNb => {
            if spec.task != Task::Classification {
                return Err(Error::InvalidArgument(
                    "bernoulli_nb supports classification only".into(),
                ));
            }
            FittedModel::BernoulliNb(nb::train_bernoulli(x, y, n_classes)?)
        }
        Family::Linear => match spec.task {
            Task::Regression => FittedModel::Ridge(linear::train_ridge(spec, x, y)?),
            Task::Classification => FittedModel::Logistic(linear::train_logistic(spec, x, y, n_classes)?),
        },
        Family::SvmLinear => match spec.task {
            Task::Classification => FittedModel::SvmClassifier(svm::train_classifier(spec, x, y, n_classes)?),
            Task::Regression => FittedModel::SvmRegressor(svm::train_regressor(spec, x, y)?),
        },
    };
    Ok(TrainedModel {
        spec: spec.clone(),
        train_feature_dim: dim,
        n_classes,
        fitted,
    })
}

impl TrainedModel {
    /// Predict a feature batch. Classification returns per-class score
    /// vectors normalized to sum 1 alongside the argmax labels.
    pub fn predict(&self, x: &[Vec<f64>]) -> Result<Predictions> {
        for row in x {
            if row.len() != self.train_feature_dim {
                return Err(Error::DimensionMismatch {
                    expected: self.train_feature_dim,
                    actual: row.len(),
                });
            }
        }
        match self.spec.task {
            Task::Regression => {
                let values = match &self.fitted {
                    FittedModel::Knn(m) => m.predict_values(x),
                    FittedModel::Tree(m) => m.predict_values(x),
                    FittedModel::Forest(m) => m.predict_values(x),
                    FittedModel::AdaboostRegressor(m) => m.predict_values(x),
                    FittedModel::GradientBoostRegressor(m) => m.predict_values(x),
                    FittedModel::Ridge(m) => m.predict_values(x),
                    FittedModel::SvmRegressor(m) => m.predict_values(x),
                    other => {
                        return Err(Error::InvariantViolation(format!(
                            "regression predict on classifier state {:?}",
                            std::mem::discriminant(other)
                        )))
                    }
                };
                Ok(Predictions::Regression(values))
            }
            Task::Classification => {
                let scores = match &self.fitted {
                    FittedModel::Knn(m) => m.predict_scores(x, self.n_classes),
                    FittedModel::Tree(m) => m.predict_scores(x),
                    FittedModel::Forest(m) => m.predict_scores(x),
                    FittedModel::AdaboostClassifier(m) => m.predict_scores(x),
                    FittedModel::GradientBoostClassifier(m) => m.predict_scores(x),
                    FittedModel::GaussianNb(m) => m.predict_scores(x),
                    FittedModel::BernoulliNb(m) => m.predict_scores(x),
                    FittedModel::Logistic(m) => m.predict_scores(x),
                    FittedModel::SvmClassifier(m) => m.predict_scores(x),
                    other => {
                        return Err(Error::InvariantViolation(format!(
                            "classification predict on regressor state {:?}",
                            std::mem::discriminant(other)
                        )))
                    }
                };
                let labels = scores.iter().map(|s| argmax_label(s)).collect();
                Ok(Predictions::Classification { labels, scores })
            }
        }
    }
}
