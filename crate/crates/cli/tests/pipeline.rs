//! End-to-end exercises of the subcommand functions on generated demo data.

use std::path::PathBuf;

use tempfile::TempDir;

use aaspectra::dataset::Task;
use aaspectra::encoding::ResiduePolicy;
use aaspectra::evaluation::{MetricsReport, PrimaryMetric};
use aaspectra_cli::commands::{
    run_descriptors, run_encode, run_evaluate, run_gendata, run_predict, run_train,
    DescriptorsArgs, EncodeArgs, EvaluateArgs, GendataArgs, PredictArgs, TrainArgs,
};

struct Demo {
    _dir: TempDir,
    root: PathBuf,
    aaindex: PathBuf,
    regression: PathBuf,
    classification: PathBuf,
    descriptors: PathBuf,
}

fn demo(rows: usize) -> Demo {
    let dir = TempDir::new().unwrap();
    let root = dir.path().to_path_buf();
    let report = run_gendata(&GendataArgs {
        out_dir: root.clone(),
        seed: 7,
        rows,
    })
    .unwrap();
    let descriptors = root.join("descriptors.json");
    run_descriptors(&DescriptorsArgs {
        aaindex: report.aaindex.clone(),
        alpha: 0.05,
        seed: 42,
        cluster_k: None,
        out: descriptors.clone(),
    })
    .unwrap();
    Demo {
        _dir: dir,
        root,
        aaindex: report.aaindex,
        regression: report.regression,
        classification: report.classification,
        descriptors,
    }
}

fn train_args(demo: &Demo, task: Task, dataset: &PathBuf, target_col: &str) -> TrainArgs {
    TrainArgs {
        descriptors: Some(demo.descriptors.clone()),
        aaindex: None,
        dataset: dataset.clone(),
        task,
        seq_col: "sequence".into(),
        target_col: target_col.into(),
        seed: 42,
        k_folds: 3,
        test_fraction: 0.2,
        alpha: 0.05,
        residue_policy: ResiduePolicy::Error,
        primary_metric: None,
        jobs: 1,
        max_models: Some(6),
        out: demo.root.join("bundle.json"),
    }
}

#[test]
fn descriptors_report_covers_all_groups() {
    let demo = demo(10);
    let report = run_descriptors(&DescriptorsArgs {
        aaindex: demo.aaindex.clone(),
        alpha: 0.05,
        seed: 42,
        cluster_k: Some(8),
        out: demo.root.join("d2.json"),
    })
    .unwrap();
    assert_eq!(report.total_records, 566);
    assert_eq!(report.incomplete_dropped, 13);
    assert_eq!(report.kept, 457);
    assert_eq!(report.groups.len(), 8);
    for (i, g) in report.groups.iter().enumerate() {
        assert_eq!(g.group_id, format!("ID-{:02}", i + 1));
        assert!(g.explained_variance > 0.5, "{}: {}", g.group_id, g.explained_variance);
    }
    let clustering = report.clustering.unwrap();
    assert_eq!(clustering.k, 8);
    assert!(clustering.calinski_harabasz.unwrap() > 1.0);
    assert!(demo.root.join("d2.json").is_file());
}

#[test]
fn encode_writes_one_row_per_sequence() {
    let demo = demo(12);
    let out = demo.root.join("features.csv");
    let report = run_encode(&EncodeArgs {
        descriptors: Some(demo.descriptors.clone()),
        aaindex: None,
        alpha: 0.05,
        dataset: demo.regression.clone(),
        seq_col: "sequence".into(),
        residue_policy: ResiduePolicy::Error,
        pad: None,
        out: out.clone(),
    })
    .unwrap();
    assert_eq!(report.rows, 12);
    assert_eq!(report.padded_length, 32);
    assert_eq!(report.feature_dim, 8 * 17);
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header.len(), 1 + 8 * 17);
    assert_eq!(header[0], "sequence");
    assert_eq!(header[1], "ID-01_bin0");
    assert_eq!(lines.count(), 12);
}

#[test]
fn encode_rejects_bad_pad_and_derives_descriptors_from_aaindex() {
    let demo = demo(5);
    let err = run_encode(&EncodeArgs {
        descriptors: Some(demo.descriptors.clone()),
        aaindex: None,
        alpha: 0.05,
        dataset: demo.regression.clone(),
        seq_col: "sequence".into(),
        residue_policy: ResiduePolicy::Error,
        pad: Some(12),
        out: demo.root.join("f.csv"),
    })
    .unwrap_err();
    assert!(err.to_string().contains("power of two"));

    // Same run straight from the flat file instead of a descriptor table.
    let report = run_encode(&EncodeArgs {
        descriptors: None,
        aaindex: Some(demo.aaindex.clone()),
        alpha: 0.05,
        dataset: demo.regression.clone(),
        seq_col: "sequence".into(),
        residue_policy: ResiduePolicy::Error,
        pad: Some(64),
        out: demo.root.join("f.csv"),
    })
    .unwrap();
    assert_eq!(report.padded_length, 64);
}

#[test]
fn train_then_predict_then_evaluate_regression() {
    let demo = demo(48);
    let args = train_args(&demo, Task::Regression, &demo.regression.clone(), "activity");
    let report = run_train(&args).unwrap();
    assert_eq!(report.seed, 42);
    assert_eq!(report.primary_metric, "pearson");
    assert_eq!(report.train_size + report.test_size, 48);
    assert_eq!(report.candidates_evaluated, 6 * 8);
    assert!(!report.selected.is_empty());
    let weight_sum: f64 = report.selected.iter().map(|s| s.weight).sum();
    assert!((weight_sum - 1.0).abs() < 1e-9);
    assert!(args.out.is_file());

    let predictions = demo.root.join("predictions.csv");
    let pred = run_predict(&PredictArgs {
        model: args.out.clone(),
        dataset: demo.regression.clone(),
        seq_col: "sequence".into(),
        out: predictions.clone(),
    })
    .unwrap();
    assert_eq!(pred.rows, 48);
    assert_eq!(pred.failed_rows, 0);
    let text = std::fs::read_to_string(&predictions).unwrap();
    assert!(text.starts_with("sequence,prediction,confidence,error"));
    assert_eq!(text.lines().count(), 49);

    let eval = run_evaluate(&EvaluateArgs {
        model: args.out.clone(),
        dataset: demo.regression.clone(),
        seq_col: "sequence".into(),
        target_col: "activity".into(),
    })
    .unwrap();
    assert_eq!(eval.rows, 48);
    match eval.metrics {
        MetricsReport::Regression(m) => assert!(m.rmse.is_finite()),
        _ => panic!("expected regression metrics"),
    }
}

#[test]
fn train_then_evaluate_classification() {
    let demo = demo(48);
    let args = train_args(
        &demo,
        Task::Classification,
        &demo.classification.clone(),
        "label",
    );
    let report = run_train(&args).unwrap();
    assert_eq!(report.primary_metric, "f1_macro");
    assert!(report.calibration.is_none(), "no calibration for classification");

    let eval = run_evaluate(&EvaluateArgs {
        model: args.out.clone(),
        dataset: demo.classification.clone(),
        seq_col: "sequence".into(),
        target_col: "label".into(),
    })
    .unwrap();
    match eval.metrics {
        MetricsReport::Classification(m) => assert!(m.accuracy > 0.5),
        _ => panic!("expected classification metrics"),
    }

    // Prediction CSV carries the class label and a confidence.
    let predictions = demo.root.join("predictions.csv");
    run_predict(&PredictArgs {
        model: args.out.clone(),
        dataset: demo.classification.clone(),
        seq_col: "sequence".into(),
        out: predictions.clone(),
    })
    .unwrap();
    let text = std::fs::read_to_string(&predictions).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert!(row[1] == "high" || row[1] == "low");
    let confidence: f64 = row[2].parse().unwrap();
    assert!((0.0..=1.0).contains(&confidence));
}

#[test]
fn train_rejects_metric_task_mismatch() {
    let demo = demo(24);
    let mut args = train_args(&demo, Task::Regression, &demo.regression.clone(), "activity");
    args.primary_metric = Some(PrimaryMetric::F1Macro);
    let err = run_train(&args).unwrap_err();
    assert!(err.to_string().contains("does not apply"));
}

#[test]
fn missing_sequence_column_is_a_named_error() {
    let demo = demo(8);
    let err = run_encode(&EncodeArgs {
        descriptors: Some(demo.descriptors.clone()),
        aaindex: None,
        alpha: 0.05,
        dataset: demo.regression.clone(),
        seq_col: "nope".into(),
        residue_policy: ResiduePolicy::Error,
        pad: None,
        out: demo.root.join("f.csv"),
    })
    .unwrap_err();
    assert!(err.to_string().contains("nope"), "{}", err);
}

#[test]
fn same_seed_training_is_reproducible() {
    let demo = demo(32);
    let mut a = train_args(&demo, Task::Regression, &demo.regression.clone(), "activity");
    a.out = demo.root.join("a.json");
    let mut b = train_args(&demo, Task::Regression, &demo.regression.clone(), "activity");
    b.out = demo.root.join("b.json");
    run_train(&a).unwrap();
    run_train(&b).unwrap();
    let bytes_a = std::fs::read(&a.out).unwrap();
    let bytes_b = std::fs::read(&b.out).unwrap();
    assert_eq!(bytes_a, bytes_b, "same-seed bundles must be byte-identical");
}
