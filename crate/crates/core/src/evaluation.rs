//! Evaluation metrics and k-fold cross-validation.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataset::{MinMaxScaler, Task};
use crate::error::{Error, Result};
use crate::models::{train_model, ModelSpec, Predictions};
use crate::stats::{average_ranks, mean, pearson};

/// Per-class confusion counts plus the derived scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class_id: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationMetrics {
    pub accuracy: f64,
    pub precision_macro: f64,
    pub recall_macro: f64,
    pub f1_macro: f64,
    pub per_class: Vec<ClassMetrics>,
    /// Names of scores that hit a zero denominator and were reported as 0.
    pub zero_division_flags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionMetrics {
    pub pearson: f64,
    pub spearman: f64,
    /// Kendall tau-a: (concordant - discordant) / (n(n-1)/2), ties count as
    /// neither.
    pub kendall_tau: f64,
    pub r2: f64,
    pub rmse: f64,
    pub mae: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricsReport {
    Classification(ClassificationMetrics),
    Regression(RegressionMetrics),
}

impl MetricsReport {
    pub fn classification(&self) -> &ClassificationMetrics {
        match self {
            MetricsReport::Classification(m) => m,
            _ => panic!("expected classification metrics"),
        }
    }

    pub fn regression(&self) -> &RegressionMetrics {
        match self {
            MetricsReport::Regression(m) => m,
            _ => panic!("expected regression metrics"),
        }
    }
}

/// Macro-averaged classification metrics over the classes present in either
/// the truth or the predictions.
pub fn classification_metrics(y_true: &[usize], y_pred: &[usize]) -> Result<ClassificationMetrics> {
    if y_true.is_empty() || y_true.len() != y_pred.len() {
        return Err(Error::DimensionMismatch {
            expected: y_true.len(),
            actual: y_pred.len(),
        });
    }
    let n_classes = y_true
        .iter()
        .chain(y_pred)
        .max()
        .map(|&m| m + 1)
        .unwrap_or(0);
    let mut tp = vec![0usize; n_classes];
    let mut fp = vec![0usize; n_classes];
    let mut fn_ = vec![0usize; n_classes];
    let mut support = vec![0usize; n_classes];
    let mut correct = 0usize;
    for (&t, &p) in y_true.iter().zip(y_pred) {
        support[t] += 1;
        if t == p {
            tp[t] += 1;
            correct += 1;
        } else {
            fp[p] += 1;
            fn_[t] += 1;
        }
    }

    let mut per_class = Vec::with_capacity(n_classes);
    let mut flags = Vec::new();
    for c in 0..n_classes {
        let mut ratio = |num: usize, den: usize, name: &str| {
            if den == 0 {
                flags.push(format!("class {} {}: zero denominator", c, name));
                0.0
            } else {
                num as f64 / den as f64
            }
        };
        let precision = ratio(tp[c], tp[c] + fp[c], "precision");
        let recall = ratio(tp[c], tp[c] + fn_[c], "recall");
        let f1 = if precision + recall == 0.0 {
            flags.push(format!("class {} f1: zero denominator", c));
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        per_class.push(ClassMetrics {
            class_id: c,
            precision,
            recall,
            f1,
            support: support[c],
        });
    }

    let k = n_classes as f64;
    Ok(ClassificationMetrics {
        accuracy: correct as f64 / y_true.len() as f64,
        precision_macro: per_class.iter().map(|m| m.precision).sum::<f64>() / k,
        recall_macro: per_class.iter().map(|m| m.recall).sum::<f64>() / k,
        f1_macro: per_class.iter().map(|m| m.f1).sum::<f64>() / k,
        per_class,
        zero_division_flags: flags,
    })
}

/// Correlation is reported as 0 when the predictions are constant; a
/// constant truth vector is an error because every correlation and R^2 is
/// undefined there.
pub fn regression_metrics(y_true: &[f64], y_pred: &[f64]) -> Result<RegressionMetrics> {
    if y_true.is_empty() || y_true.len() != y_pred.len() {
        return Err(Error::DimensionMismatch {
            expected: y_true.len(),
            actual: y_pred.len(),
        });
    }
    let first = y_true[0];
    if y_true.iter().all(|&t| t == first) {
        return Err(Error::DegenerateTarget(
            "constant truth vector".into(),
        ));
    }

    let n = y_true.len();
    let guarded_pearson = |a: &[f64], b: &[f64]| {
        let r = pearson(a, b);
        if r.is_finite() {
            r
        } else {
            0.0
        }
    };

    let mut concordant = 0i64;
    let mut discordant = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            let dt = y_true[j] - y_true[i];
            let dp = y_pred[j] - y_pred[i];
            let product = dt * dp;
            if product > 0.0 {
                concordant += 1;
            } else if product < 0.0 {
                discordant += 1;
            }
        }
    }
    let pairs = (n * (n - 1) / 2) as f64;

    let mean_true = mean(y_true);
    let ss_res: f64 = y_true
        .iter()
        .zip(y_pred)
        .map(|(t, p)| (t - p).powi(2))
        .sum();
    let ss_tot: f64 = y_true.iter().map(|t| (t - mean_true).powi(2)).sum();

    Ok(RegressionMetrics {
        pearson: guarded_pearson(y_true, y_pred),
        spearman: guarded_pearson(&average_ranks(y_true), &average_ranks(y_pred)),
        kendall_tau: (concordant - discordant) as f64 / pairs,
        r2: 1.0 - ss_res / ss_tot,
        rmse: (ss_res / n as f64).sqrt(),
        mae: y_true
            .iter()
            .zip(y_pred)
            .map(|(t, p)| (t - p).abs())
            .sum::<f64>()
            / n as f64,
    })
}

/// The single score used to rank models. Scores are oriented so that larger
/// is always better (RMSE is negated).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimaryMetric {
    Accuracy,
    F1Macro,
    Pearson,
    Spearman,
    R2,
    Rmse,
}

impl std::str::FromStr for PrimaryMetric {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "accuracy" => Ok(PrimaryMetric::Accuracy),
            "f1" | "f1_macro" | "fscore" => Ok(PrimaryMetric::F1Macro),
            "pearson" => Ok(PrimaryMetric::Pearson),
            "spearman" => Ok(PrimaryMetric::Spearman),
            "r2" => Ok(PrimaryMetric::R2),
            "rmse" => Ok(PrimaryMetric::Rmse),
            other => Err(Error::InvalidArgument(format!(
                "unknown metric '{}' (expected accuracy|f1|pearson|spearman|r2|rmse)",
                other
            ))),
        }
    }
}

impl PrimaryMetric {
    pub fn default_for(task: Task) -> PrimaryMetric {
        match task {
            Task::Classification => PrimaryMetric::F1Macro,
            Task::Regression => PrimaryMetric::Pearson,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PrimaryMetric::Accuracy => "accuracy",
            PrimaryMetric::F1Macro => "f1_macro",
            PrimaryMetric::Pearson => "pearson",
            PrimaryMetric::Spearman => "spearman",
            PrimaryMetric::R2 => "r2",
            PrimaryMetric::Rmse => "rmse",
        }
    }

    pub fn matches_task(&self, task: Task) -> bool {
        match self {
            PrimaryMetric::Accuracy | PrimaryMetric::F1Macro => task == Task::Classification,
            _ => task == Task::Regression,
        }
    }

    /// Higher-is-better score extracted from a report.
    pub fn oriented_score(&self, report: &MetricsReport) -> Result<f64> {
        let score = match (self, report) {
            (PrimaryMetric::Accuracy, MetricsReport::Classification(m)) => m.accuracy,
            (PrimaryMetric::F1Macro, MetricsReport::Classification(m)) => m.f1_macro,
            (PrimaryMetric::Pearson, MetricsReport::Regression(m)) => m.pearson,
            (PrimaryMetric::Spearman, MetricsReport::Regression(m)) => m.spearman,
            (PrimaryMetric::R2, MetricsReport::Regression(m)) => m.r2,
            (PrimaryMetric::Rmse, MetricsReport::Regression(m)) => -m.rmse,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "metric {} does not apply to this task",
                    self.name()
                )))
            }
        };
        Ok(score)
    }
}

/// Metrics for a batch of predictions against the matching task's truth.
pub fn score_predictions(y_true: &[f64], predictions: &Predictions) -> Result<MetricsReport> {
    match predictions {
        Predictions::Regression(values) => {
            Ok(MetricsReport::Regression(regression_metrics(y_true, values)?))
        }
        Predictions::Classification { labels, .. } => {
            let truth: Vec<usize> = y_true.iter().map(|&t| t as usize).collect();
            Ok(MetricsReport::Classification(classification_metrics(
                &truth, labels,
            )?))
        }
    }
}

/// Outcome of one cross-validated spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvOutcome {
    pub fold_scores: Vec<f64>,
    pub mean_score: f64,
    /// Reasons for folds that could not be scored (degenerate train or
    /// validation data). Scored folds exclude these.
    pub skipped_folds: Vec<String>,
}

/// Deterministic fold assignment: each index appears in exactly one fold.
/// Classification folds are stratified by round-robin within each class.
pub fn assign_folds(targets: &[f64], task: Task, k: usize, seed: u64) -> Result<Vec<usize>> {
    let n = targets.len();
    if k < 2 || k > n {
        return Err(Error::InvalidArgument(format!(
            "k-folds must be in [2, {}], got {}",
            n, k
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold = vec![0usize; n];
    match task {
        Task::Classification => {
            let mut by_class: HashMap<usize, Vec<usize>> = HashMap::new();
            for (i, &t) in targets.iter().enumerate() {
                by_class.entry(t as usize).or_default().push(i);
            }
            let mut classes: Vec<usize> = by_class.keys().copied().collect();
            classes.sort_unstable();
            let mut next = 0usize;
            for c in classes {
                let mut members = by_class.remove(&c).unwrap();
                members.shuffle(&mut rng);
                for i in members {
                    fold[i] = next % k;
                    next += 1;
                }
            }
        }
        Task::Regression => {
            let mut indices: Vec<usize> = (0..n).collect();
            indices.shuffle(&mut rng);
            for (pos, i) in indices.into_iter().enumerate() {
                fold[i] = pos % k;
            }
        }
    }
    Ok(fold)
}

/// k-fold cross-validation of one model spec on raw (unscaled) features.
/// The min-max scaler is refit on each fold's training portion.
pub fn kfold_cv(
    spec: &ModelSpec,
    features: &[Vec<f64>],
    targets: &[f64],
    k: usize,
    seed: u64,
    metric: PrimaryMetric,
) -> Result<CvOutcome> {
    if features.len() != targets.len() {
        return Err(Error::DimensionMismatch {
            expected: features.len(),
            actual: targets.len(),
        });
    }
    if !metric.matches_task(spec.task) {
        return Err(Error::InvalidArgument(format!(
            "metric {} does not apply to this task",
            metric.name()
        )));
    }
    let fold = assign_folds(targets, spec.task, k, seed)?;

    let mut fold_scores = Vec::new();
    let mut skipped = Vec::new();
    for f in 0..k {
        let train_idx: Vec<usize> = (0..targets.len()).filter(|&i| fold[i] != f).collect();
        let val_idx: Vec<usize> = (0..targets.len()).filter(|&i| fold[i] == f).collect();
        if val_idx.is_empty() {
            skipped.push(format!("fold {}: empty validation set", f));
            continue;
        }
        let x_train: Vec<Vec<f64>> = train_idx.iter().map(|&i| features[i].clone()).collect();
        let y_train: Vec<f64> = train_idx.iter().map(|&i| targets[i]).collect();
        let x_val: Vec<Vec<f64>> = val_idx.iter().map(|&i| features[i].clone()).collect();
        let y_val: Vec<f64> = val_idx.iter().map(|&i| targets[i]).collect();

        let scaler = MinMaxScaler::fit(&x_train)?;
        let x_train = scaler.apply(&x_train)?;
        let x_val = scaler.apply(&x_val)?;

        let model = match train_model(spec, &x_train, &y_train) {
            Ok(m) => m,
            Err(Error::DegenerateTrainingData(msg)) => {
                skipped.push(format!("fold {}: {}", f, msg));
                continue;
            }
            Err(e) => return Err(e),
        };
        let predictions = model.predict(&x_val)?;
        match score_predictions(&y_val, &predictions) {
            Ok(report) => fold_scores.push(metric.oriented_score(&report)?),
            Err(Error::DegenerateTarget(msg)) => {
                skipped.push(format!("fold {}: {}", f, msg));
            }
            Err(e) => return Err(e),
        }
    }

    if fold_scores.is_empty() {
        return Err(Error::DegenerateTrainingData(format!(
            "no scorable folds: {}",
            skipped.join("; ")
        )));
    }
    let mean_score = mean(&fold_scores);
    Ok(CvOutcome {
        fold_scores,
        mean_score,
        skipped_folds: skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{Family, ParamValue};
    use proptest::prelude::*;

    #[test]
    fn classification_metrics_hand_example() {
        // truth [0,0,1,1,2], predicted [0,1,1,1,2]:
        //   class 0: p=1/1, r=1/2, f1=2/3
        //   class 1: p=2/3, r=2/2, f1=4/5
        //   class 2: p=1/1, r=1/1, f1=1
        let m = classification_metrics(&[0, 0, 1, 1, 2], &[0, 1, 1, 1, 2]).unwrap();
        assert!((m.accuracy - 0.8).abs() < 1e-12);
        assert!((m.per_class[0].f1 - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.per_class[1].precision - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.precision_macro - 8.0 / 9.0).abs() < 1e-12);
        assert!((m.recall_macro - 5.0 / 6.0).abs() < 1e-12);
        assert!((m.f1_macro - (2.0 / 3.0 + 0.8 + 1.0) / 3.0).abs() < 1e-12);
        assert!(m.zero_division_flags.is_empty());
    }

    #[test]
    fn never_predicted_class_flags_zero_precision() {
        let m = classification_metrics(&[0, 1], &[0, 0]).unwrap();
        assert_eq!(m.per_class[1].precision, 0.0);
        assert!(!m.zero_division_flags.is_empty());
    }

    #[test]
    fn regression_metrics_on_perfect_fit() {
        let y = [1.0, 2.0, 4.0, 8.0];
        let m = regression_metrics(&y, &y).unwrap();
        assert!((m.pearson - 1.0).abs() < 1e-12);
        assert!((m.spearman - 1.0).abs() < 1e-12);
        assert!((m.kendall_tau - 1.0).abs() < 1e-12);
        assert!((m.r2 - 1.0).abs() < 1e-12);
        assert_eq!(m.rmse, 0.0);
        assert_eq!(m.mae, 0.0);
    }

    #[test]
    fn kendall_tau_ignores_tied_pairs() {
        // Pairs (1,2) tied in predictions, (1,3) and (2,3) concordant:
        // tau = (2 - 0) / 3 = 2/3.
        let m = regression_metrics(&[1.0, 2.0, 3.0], &[1.0, 1.0, 2.0]).unwrap();
        assert!((m.kendall_tau - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn spearman_is_one_for_monotone_nonlinear() {
        let y = [1.0, 2.0, 3.0, 4.0, 5.0];
        let p: Vec<f64> = y.iter().map(|v| f64::exp(*v)).collect();
        let m = regression_metrics(&y, &p).unwrap();
        assert!((m.spearman - 1.0).abs() < 1e-12);
        assert!(m.pearson < 1.0);
    }

    #[test]
    fn mean_predictor_has_zero_r2() {
        let y = [1.0, 2.0, 3.0, 6.0];
        let p = vec![3.0; 4];
        let m = regression_metrics(&y, &p).unwrap();
        assert!(m.r2.abs() < 1e-12);
        assert_eq!(m.pearson, 0.0); // constant predictions guard
    }

    #[test]
    fn constant_truth_is_an_error() {
        assert!(matches!(
            regression_metrics(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]),
            Err(Error::DegenerateTarget(_))
        ));
    }

    #[test]
    fn oriented_score_negates_rmse() {
        let m = regression_metrics(&[1.0, 2.0, 3.0], &[1.0, 2.0, 4.0]).unwrap();
        let report = MetricsReport::Regression(m.clone());
        let s = PrimaryMetric::Rmse.oriented_score(&report).unwrap();
        assert!((s + m.rmse).abs() < 1e-12);
    }

    #[test]
    fn fold_assignment_stratifies_classes() {
        // 12 samples, 2 balanced classes, 3 folds: each fold should see
        // 2 members of each class.
        let targets: Vec<f64> = (0..12).map(|i| (i % 2) as f64).collect();
        let fold = assign_folds(&targets, Task::Classification, 3, 9).unwrap();
        for f in 0..3 {
            for class in 0..2 {
                let count = targets
                    .iter()
                    .zip(&fold)
                    .filter(|(&t, &ff)| t as usize == class && ff == f)
                    .count();
                assert_eq!(count, 2);
            }
        }
    }

    #[test]
    fn cv_scores_an_easy_regression() {
        let features: Vec<Vec<f64>> = (0..30).map(|i| vec![i as f64]).collect();
        let targets: Vec<f64> = features.iter().map(|r| 3.0 * r[0] + 1.0).collect();
        let spec = ModelSpec::new(Family::Linear, Task::Regression, 0)
            .with("regularization", ParamValue::Float(0.0));
        let out = kfold_cv(&spec, &features, &targets, 5, 4, PrimaryMetric::Pearson).unwrap();
        assert_eq!(out.fold_scores.len(), 5);
        assert!(out.mean_score > 0.999, "{}", out.mean_score);
    }

    #[test]
    fn cv_rejects_mismatched_metric() {
        let features = vec![vec![0.0], vec![1.0]];
        let targets = vec![0.0, 1.0];
        let spec = ModelSpec::new(Family::Linear, Task::Regression, 0);
        assert!(kfold_cv(&spec, &features, &targets, 2, 0, PrimaryMetric::Accuracy).is_err());
    }

    proptest! {
        #[test]
        fn folds_partition_all_indices(n in 6usize..60, k in 2usize..6, seed in 0u64..50) {
            let k = k.min(n);
            let targets: Vec<f64> = (0..n).map(|i| (i % 3) as f64).collect();
            let fold = assign_folds(&targets, Task::Classification, k, seed).unwrap();
            prop_assert_eq!(fold.len(), n);
            prop_assert!(fold.iter().all(|&f| f < k));
            // Fold sizes differ by at most one per class under round-robin.
            let mut sizes = vec![0usize; k];
            for &f in &fold {
                sizes[f] += 1;
            }
            let min = *sizes.iter().min().unwrap();
            let max = *sizes.iter().max().unwrap();
            prop_assert!(max - min <= 3);
        }

        #[test]
        fn accuracy_bounded_and_exact_on_self(labels in proptest::collection::vec(0usize..4, 1..40)) {
            let m = classification_metrics(&labels, &labels).unwrap();
            prop_assert!((m.accuracy - 1.0).abs() < 1e-12);
        }

        #[test]
        fn pearson_invariant_under_positive_affine_prediction_transform(
            ys in proptest::collection::vec(-10.0f64..10.0, 4..30),
            scale in 0.1f64..5.0,
            shift in -5.0f64..5.0,
        ) {
            let y_true: Vec<f64> = (0..ys.len()).map(|i| i as f64).collect();
            prop_assume!(ys.iter().any(|&v| v != ys[0]));
            let transformed: Vec<f64> = ys.iter().map(|v| scale * v + shift).collect();
            let a = regression_metrics(&y_true, &ys).unwrap();
            let b = regression_metrics(&y_true, &transformed).unwrap();
            prop_assert!((a.pearson - b.pearson).abs() < 1e-9);
            prop_assert!((a.kendall_tau - b.kendall_tau).abs() < 1e-12);
        }
    }
}
