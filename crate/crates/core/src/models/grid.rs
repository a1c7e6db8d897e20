//! Deterministic hyperparameter grid for the exploration stage.

use crate::dataset::Task;

use super::{Family, ModelSpec, ParamValue};

const ESTIMATOR_COUNTS: [i64; 4] = [10, 50, 100, 200];

/// Enumerate the documented grid for one task. The list is deterministic:
/// two calls produce byte-identical spec lists, with seeds fixed by grid
/// position.
pub fn enumerate_model_grid(task: Task) -> Vec<ModelSpec> {
    let mut specs = Vec::new();
    let mut push = |spec: ModelSpec| {
        let seed = 1000 + specs.len() as u64;
        specs.push(ModelSpec { seed, ..spec });
    };

    for k in [1i64, 3, 5, 7, 9, 15] {
        for weights in ["uniform", "distance"] {
            for metric in ["euclidean", "manhattan"] {
                push(
                    ModelSpec::new(Family::Knn, task, 0)
                        .with("k", ParamValue::Int(k))
                        .with("weights", ParamValue::Text(weights.into()))
                        .with("metric", ParamValue::Text(metric.into())),
                );
            }
        }
    }

    let criteria: [&str; 2] = match task {
        Task::Classification => ["gini", "entropy"],
        Task::Regression => ["mse", "mae"],
    };
    for criterion in criteria {
        for max_depth in [0i64, 4, 8, 16] {
            // 0 encodes "no depth limit".
            push(
                ModelSpec::new(Family::DecisionTree, task, 0)
                    .with("criterion", ParamValue::Text(criterion.into()))
                    .with("max_depth", ParamValue::Int(max_depth)),
            );
        }
    }

    for n in ESTIMATOR_COUNTS {
        for bootstrap in [true, false] {
            push(
                ModelSpec::new(Family::RandomForest, task, 0)
                    .with("n_estimators", ParamValue::Int(n))
                    .with("bootstrap", ParamValue::Bool(bootstrap)),
            );
        }
    }

    for n in ESTIMATOR_COUNTS {
        push(
            ModelSpec::new(Family::Bagging, task, 0)
                .with("n_estimators", ParamValue::Int(n)),
        );
    }

    for n in ESTIMATOR_COUNTS {
        push(
            ModelSpec::new(Family::Adaboost, task, 0)
                .with("n_estimators", ParamValue::Int(n)),
        );
    }

    let gb_loss = match task {
        Task::Classification => "logistic",
        Task::Regression => "squared",
    };
    for n in ESTIMATOR_COUNTS {
        push(
            ModelSpec::new(Family::GradientBoosting, task, 0)
                .with("n_estimators", ParamValue::Int(n))
                .with("loss", ParamValue::Text(gb_loss.into())),
        );
    }

    if task == Task::Classification {
        push(ModelSpec::new(Family::GaussianNb, task, 0));
        push(ModelSpec::new(Family::BernoulliNb, task, 0));
    }

    for strength in [0.01, 0.1, 1.0, 10.0] {
        push(
            ModelSpec::new(Family::Linear, task, 0)
                .with("regularization", ParamValue::Float(strength)),
        );
    }

    for c in [0.1, 1.0, 10.0, 100.0] {
        push(
            ModelSpec::new(Family::SvmLinear, task, 0).with("c", ParamValue::Float(c)),
        );
    }

    specs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes_meet_the_floor() {
        assert!(enumerate_model_grid(Task::Classification).len() >= 60);
        assert!(enumerate_model_grid(Task::Regression).len() >= 60);
    }

    #[test]
    fn bernoulli_only_for_classification() {
        let classification = enumerate_model_grid(Task::Classification);
        assert!(classification.iter().any(|s| s.family == Family::BernoulliNb));
        assert!(classification.iter().any(|s| s.family == Family::GaussianNb));
        let regression = enumerate_model_grid(Task::Regression);
        assert!(!regression.iter().any(|s| s.family == Family::BernoulliNb));
        assert!(!regression.iter().any(|s| s.family == Family::GaussianNb));
    }

    #[test]
    fn grid_is_byte_identical_across_calls() {
        let a = serde_json::to_vec(&enumerate_model_grid(Task::Classification)).unwrap();
        let b = serde_json::to_vec(&enumerate_model_grid(Task::Classification)).unwrap();
        assert_eq!(a, b);
    }
}
