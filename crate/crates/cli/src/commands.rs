//! Subcommand implementations.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use aaspectra::aaindex::{drop_incomplete, parse_aaindex};
use aaspectra::dataset::{
    load_dataset, split_dataset, Dataset, DatasetSchema, MinMaxScaler, Task,
};
use aaspectra::encoding::{feature_row, spectral_encode, ResiduePolicy};
use aaspectra::ensemble::{
    assemble, load_bundle, save_bundle, select_outlier_indices, Calibration, EnsembleBundle,
    RowPrediction, ScoredModel, BUNDLE_SCHEMA_VERSION,
};
use aaspectra::error::{Error, Result};
use aaspectra::evaluation::{
    kfold_cv, score_predictions, MetricsReport, PrimaryMetric,
};
use aaspectra::fft::next_power_of_two;
use aaspectra::models::{enumerate_model_grid, train_model, ModelSpec};
use aaspectra::propgroups::{
    assign_keyword_groups, calinski_harabasz, default_lexicon, group_pca_descriptor,
    kmeans_cluster, ks_normality_filter, AminoAcidDescriptor, DescriptorTable,
};
use aaspectra::stats::{mean, sample_std};
use aaspectra::synth;

// ---------------------------------------------------------------- descriptors

pub struct DescriptorsArgs {
    pub aaindex: PathBuf,
    pub alpha: f64,
    pub seed: u64,
    /// Run the k-means diagnostic with this k and report the
    /// Calinski-Harabasz score alongside the keyword grouping.
    pub cluster_k: Option<usize>,
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
pub struct DescriptorGroupReport {
    pub group_id: String,
    pub keyword: String,
    pub members: usize,
    pub explained_variance: f64,
}

#[derive(Debug, Serialize)]
pub struct ClusterReport {
    pub k: usize,
    pub calinski_harabasz: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct DescriptorsReport {
    pub alpha: f64,
    pub total_records: usize,
    pub incomplete_dropped: usize,
    pub non_normal_dropped: usize,
    pub kept: usize,
    pub groups: Vec<DescriptorGroupReport>,
    pub clustering: Option<ClusterReport>,
    pub warnings: Vec<String>,
    pub out: PathBuf,
}

pub fn run_descriptors(args: &DescriptorsArgs) -> Result<DescriptorsReport> {
    let text = std::fs::read_to_string(&args.aaindex)?;
    let records = parse_aaindex(&text).map_err(|e| e.in_stage("parse"))?;
    let complete = drop_incomplete(&records);
    let kept = ks_normality_filter(&complete, args.alpha).map_err(|e| e.in_stage("filter"))?;
    if kept.is_empty() {
        return Err(Error::EmptyDataset(
            "no property records survived filtering".into(),
        ));
    }
    let groups = assign_keyword_groups(&kept, &default_lexicon());

    let mut warnings = Vec::new();
    let mut pairs = Vec::new();
    let mut group_reports = Vec::new();
    for group in groups {
        if group.members.len() < 2 {
            warnings.push(format!(
                "group {} has {} member(s); no descriptor produced",
                group.group_id,
                group.members.len()
            ));
            continue;
        }
        let descriptor = group_pca_descriptor(&group).map_err(|e| e.in_stage("pca"))?;
        group_reports.push(DescriptorGroupReport {
            group_id: group.group_id.clone(),
            keyword: format!("{:?}", group.keyword),
            members: group.members.len(),
            explained_variance: descriptor.explained_variance,
        });
        pairs.push((group, descriptor));
    }
    if pairs.is_empty() {
        return Err(Error::EmptyDataset("no group had enough members".into()));
    }

    let clustering = match args.cluster_k {
        Some(k) => {
            // Cluster per-record standardized profiles as a diagnostic of
            // how well the corpus separates.
            let vectors: Vec<Vec<f64>> = kept
                .iter()
                .map(|r| {
                    let v = r.complete_values().expect("filtered records are complete");
                    let m = mean(&v);
                    let s = sample_std(&v);
                    v.iter().map(|x| (x - m) / s).collect()
                })
                .collect();
            let partition = kmeans_cluster(&vectors, k, args.seed).map_err(|e| e.in_stage("cluster"))?;
            let score = match calinski_harabasz(&vectors, &partition.labels, k) {
                Ok(s) => Some(s),
                Err(e) => {
                    warnings.push(format!("cluster scoring failed: {}", e));
                    None
                }
            };
            Some(ClusterReport {
                k,
                calinski_harabasz: score,
            })
        }
        None => None,
    };

    let table = DescriptorTable::from_groups(&pairs);
    let file = std::fs::File::create(&args.out)?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(file), &table)?;

    Ok(DescriptorsReport {
        alpha: args.alpha,
        total_records: records.len(),
        incomplete_dropped: records.len() - complete.len(),
        non_normal_dropped: complete.len() - kept.len(),
        kept: kept.len(),
        groups: group_reports,
        clustering,
        warnings,
        out: args.out.clone(),
    })
}

// --------------------------------------------------------------------- shared

fn load_descriptor_table(path: &Path) -> Result<DescriptorTable> {
    let text = std::fs::read_to_string(path)?;
    let table: DescriptorTable = serde_json::from_str(&text)?;
    // Validates the schema version and the weight map.
    table.descriptors()?;
    Ok(table)
}

/// Descriptors for training: either a precomputed table or a fresh run over
/// an AAIndex file.
pub fn resolve_descriptors(
    descriptors: &Option<PathBuf>,
    aaindex: &Option<PathBuf>,
    alpha: f64,
    seed: u64,
) -> Result<DescriptorTable> {
    match (descriptors, aaindex) {
        (Some(path), _) => load_descriptor_table(path),
        (None, Some(aaindex)) => {
            let dir = std::env::temp_dir();
            let out = dir.join(format!("aaspectra-descriptors-{}.json", std::process::id()));
            let report = run_descriptors(&DescriptorsArgs {
                aaindex: aaindex.clone(),
                alpha,
                seed,
                cluster_k: None,
                out: out.clone(),
            })?;
            let table = load_descriptor_table(&report.out)?;
            let _ = std::fs::remove_file(&out);
            Ok(table)
        }
        (None, None) => Err(Error::InvalidArgument(
            "either --descriptors or --aaindex is required".into(),
        )),
    }
}

fn read_sequence_column(path: &Path, seq_col: &str) -> Result<Vec<String>> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let idx = headers
        .iter()
        .position(|h| h == seq_col)
        .ok_or_else(|| Error::MissingColumn(seq_col.to_string()))?;
    let mut sequences = Vec::new();
    for record in reader.records() {
        let record = record?;
        sequences.push(record.get(idx).unwrap_or("").trim().to_string());
    }
    Ok(sequences)
}

/// Raw (unscaled) spectra per group for a batch of sequences.
fn group_feature_matrices(
    sequences: &[String],
    descriptors: &[AminoAcidDescriptor],
    padded_length: usize,
    policy: ResiduePolicy,
) -> Result<BTreeMap<String, Vec<Vec<f64>>>> {
    let mut by_group: BTreeMap<String, Vec<Vec<f64>>> = descriptors
        .iter()
        .map(|d| (d.group_id.clone(), Vec::with_capacity(sequences.len())))
        .collect();
    for (row, seq) in sequences.iter().enumerate() {
        let spectra = spectral_encode(seq, descriptors, padded_length, policy)
            .map_err(|e| Error::InvalidArgument(format!("row {} ({}): {}", row + 1, seq, e)))?;
        for s in spectra {
            by_group.get_mut(&s.group_id).unwrap().push(s.magnitudes);
        }
    }
    Ok(by_group)
}

// --------------------------------------------------------------------- encode

pub struct EncodeArgs {
    pub descriptors: Option<PathBuf>,
    pub aaindex: Option<PathBuf>,
    pub alpha: f64,
    pub dataset: PathBuf,
    pub seq_col: String,
    pub residue_policy: ResiduePolicy,
    /// Power-of-two pad length; derived from the longest sequence if absent.
    pub pad: Option<usize>,
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
pub struct EncodeReport {
    pub rows: usize,
    pub padded_length: usize,
    pub feature_dim: usize,
    pub out: PathBuf,
}

pub fn run_encode(args: &EncodeArgs) -> Result<EncodeReport> {
    let table = resolve_descriptors(&args.descriptors, &args.aaindex, args.alpha, 0)?;
    let descriptors = table.descriptors()?;
    let sequences = read_sequence_column(&args.dataset, &args.seq_col)?;
    if sequences.is_empty() {
        return Err(Error::EmptyDataset("no sequences in dataset".into()));
    }
    let longest = sequences.iter().map(|s| s.len()).max().unwrap();
    let padded_length = match args.pad {
        Some(p) => {
            if !p.is_power_of_two() || p < longest {
                return Err(Error::InvalidArgument(format!(
                    "pad must be a power of two >= longest sequence ({}), got {}",
                    longest, p
                )));
            }
            p
        }
        None => next_power_of_two(longest),
    };

    let bins = padded_length / 2 + 1;
    let mut writer = csv::Writer::from_path(&args.out)?;
    let mut header = vec!["sequence".to_string()];
    for d in &descriptors {
        for b in 0..bins {
            header.push(format!("{}_bin{}", d.group_id, b));
        }
    }
    writer.write_record(&header)?;
    for (row, seq) in sequences.iter().enumerate() {
        let spectra = spectral_encode(seq, &descriptors, padded_length, args.residue_policy)
            .map_err(|e| Error::InvalidArgument(format!("row {} ({}): {}", row + 1, seq, e)))?;
        let features = feature_row(&spectra);
        let mut record = vec![seq.clone()];
        record.extend(features.iter().map(|v| format!("{}", v)));
        writer.write_record(&record)?;
    }
    writer.flush()?;

    Ok(EncodeReport {
        rows: sequences.len(),
        padded_length,
        feature_dim: descriptors.len() * bins,
        out: args.out.clone(),
    })
}

// ---------------------------------------------------------------------- train

pub struct TrainArgs {
    pub descriptors: Option<PathBuf>,
    pub aaindex: Option<PathBuf>,
    pub dataset: PathBuf,
    pub task: Task,
    pub seq_col: String,
    pub target_col: String,
    pub seed: u64,
    pub k_folds: usize,
    pub test_fraction: f64,
    pub alpha: f64,
    pub residue_policy: ResiduePolicy,
    pub primary_metric: Option<PrimaryMetric>,
    /// Worker threads for cross-validation; 0 uses all cores.
    pub jobs: usize,
    /// Cap on grid size per task, sampled evenly across the grid.
    pub max_models: Option<usize>,
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
pub struct CandidateReport {
    pub group_id: String,
    pub model: String,
    pub mean_score: f64,
    pub fold_scores: Vec<f64>,
    pub skipped_folds: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct FailedCandidate {
    pub group_id: String,
    pub model: String,
    pub error: String,
}

#[derive(Debug, Serialize)]
pub struct SelectedReport {
    pub group_id: String,
    pub model: String,
    pub validation_score: f64,
    pub weight: f64,
    /// The member's own oriented score on the held-out test set.
    pub test_score: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct TrainReport {
    pub seed: u64,
    pub task: Task,
    pub primary_metric: String,
    pub padded_length: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub candidates_evaluated: usize,
    pub candidates: Vec<CandidateReport>,
    pub failed_candidates: Vec<FailedCandidate>,
    pub selected: Vec<SelectedReport>,
    pub calibration: Option<Calibration>,
    pub test_metrics: Option<MetricsReport>,
    pub warnings: Vec<String>,
    pub bundle: PathBuf,
}

/// Evenly sample at most `max` specs out of the grid, preserving order (and
/// so family diversity).
fn cap_grid(grid: Vec<ModelSpec>, max: Option<usize>) -> Vec<ModelSpec> {
    match max {
        Some(max) if max > 0 && max < grid.len() => {
            (0..max).map(|i| grid[i * grid.len() / max].clone()).collect()
        }
        _ => grid,
    }
}

pub fn run_train(args: &TrainArgs) -> Result<TrainReport> {
    let metric = args
        .primary_metric
        .unwrap_or_else(|| PrimaryMetric::default_for(args.task));
    if !metric.matches_task(args.task) {
        return Err(Error::InvalidArgument(format!(
            "metric {} does not apply to task {:?}",
            metric.name(),
            args.task
        )));
    }

    let table = resolve_descriptors(&args.descriptors, &args.aaindex, args.alpha, args.seed)
        .map_err(|e| e.in_stage("descriptors"))?;
    let descriptors = table.descriptors()?;

    let schema = DatasetSchema {
        sequence_column: args.seq_col.clone(),
        target_column: args.target_col.clone(),
    };
    let dataset = load_dataset(&args.dataset, &schema, args.task).map_err(|e| e.in_stage("load"))?;
    let mut warnings = dataset.warnings.clone();
    if dataset.dropped_count > 0 {
        warnings.push(format!("{} rows dropped during cleaning", dataset.dropped_count));
    }
    let (train, test) =
        split_dataset(&dataset, args.test_fraction, args.seed, true).map_err(|e| e.in_stage("split"))?;
    warnings.extend(train.warnings.clone());

    let longest = dataset.sequences.iter().map(|s| s.len()).max().unwrap();
    let padded_length = next_power_of_two(longest);

    let train_features =
        group_feature_matrices(&train.sequences, &descriptors, padded_length, args.residue_policy)
            .map_err(|e| e.in_stage("encode"))?;

    let grid = cap_grid(enumerate_model_grid(args.task), args.max_models);
    let tasks: Vec<(&str, &ModelSpec)> = descriptors
        .iter()
        .map(|d| d.group_id.as_str())
        .flat_map(|g| grid.iter().map(move |s| (g, s)))
        .collect();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {}", e)))?;
    let outcomes: Vec<(String, ModelSpec, Result<aaspectra::evaluation::CvOutcome>)> = pool
        .install(|| {
            tasks
                .par_iter()
                .map(|(group, spec)| {
                    let features = &train_features[*group];
                    let outcome = kfold_cv(
                        spec,
                        features,
                        &train.targets,
                        args.k_folds,
                        args.seed,
                        metric,
                    );
                    (group.to_string(), (*spec).clone(), outcome)
                })
                .collect()
        });

    let mut candidates = Vec::new();
    let mut failed = Vec::new();
    for (group, spec, outcome) in outcomes {
        match outcome {
            Ok(cv) => candidates.push((group, spec, cv)),
            Err(e) => failed.push(FailedCandidate {
                group_id: group,
                model: spec.label(),
                error: e.to_string(),
            }),
        }
    }
    if candidates.is_empty() {
        return Err(Error::DegenerateTrainingData(format!(
            "no candidate survived cross-validation ({} failures)",
            failed.len()
        )));
    }

    let keyed: Vec<(String, aaspectra::models::Family, f64)> = candidates
        .iter()
        .map(|(g, s, cv)| (g.clone(), s.family, cv.mean_score))
        .collect();
    let picked = select_outlier_indices(&keyed).map_err(|e| e.in_stage("select"))?;

    // Refit the picked candidates on the full training split, with one
    // scaler per group fitted on the full training spectra.
    let mut scalers: BTreeMap<String, MinMaxScaler> = BTreeMap::new();
    let mut scaled_train: BTreeMap<String, Vec<Vec<f64>>> = BTreeMap::new();
    for (group, features) in &train_features {
        let scaler = MinMaxScaler::fit(features)?;
        scaled_train.insert(group.clone(), scaler.apply(features)?);
        scalers.insert(group.clone(), scaler);
    }

    let mut selected_models = Vec::new();
    for &i in &picked {
        let (group, spec, cv) = &candidates[i];
        match train_model(spec, &scaled_train[group], &train.targets) {
            Ok(model) => selected_models.push(ScoredModel {
                group_id: group.clone(),
                model,
                validation_score: cv.mean_score,
            }),
            Err(e) => warnings.push(format!(
                "refit of {} on {} failed: {}",
                spec.label(),
                group,
                e
            )),
        }
    }
    let members = assemble(selected_models).map_err(|e| e.in_stage("assemble"))?;

    let mut bundle = EnsembleBundle {
        schema_version: BUNDLE_SCHEMA_VERSION,
        task: args.task,
        padded_length,
        residue_policy: args.residue_policy,
        primary_metric: metric,
        descriptor_table: table,
        scalers,
        members,
        class_names: dataset.class_names.clone(),
        calibration: None,
    };

    if args.task == Task::Regression {
        match bundle
            .combine_scaled(&scaled_train, train.len())
            .and_then(|raw| Calibration::fit(&train.targets, &raw))
        {
            Ok(cal) => bundle.calibration = Some(cal),
            Err(e) => warnings.push(format!("calibration skipped: {}", e)),
        }
    }

    save_bundle(&bundle, &args.out).map_err(|e| e.in_stage("save"))?;

    // Held-out evaluation: the ensemble plus each member on its own.
    let test_features =
        group_feature_matrices(&test.sequences, &descriptors, padded_length, args.residue_policy)
            .map_err(|e| e.in_stage("encode"))?;
    let mut scaled_test: BTreeMap<String, Vec<Vec<f64>>> = BTreeMap::new();
    for (group, features) in &test_features {
        scaled_test.insert(group.clone(), bundle.scalers[group].apply(features)?);
    }

    let mut selected_reports = Vec::new();
    for member in &bundle.members {
        let test_score = member
            .model
            .predict(&scaled_test[&member.group_id])
            .and_then(|p| score_predictions(&test.targets, &p))
            .and_then(|r| metric.oriented_score(&r))
            .ok();
        selected_reports.push(SelectedReport {
            group_id: member.group_id.clone(),
            model: member.model.spec.label(),
            validation_score: member.validation_score,
            weight: member.weight,
            test_score,
        });
    }

    let test_metrics = match evaluate_bundle(&bundle, &test) {
        Ok((metrics, n_failed)) => {
            if n_failed > 0 {
                warnings.push(format!("{} test rows failed to encode", n_failed));
            }
            Some(metrics)
        }
        Err(e) => {
            warnings.push(format!("test evaluation failed: {}", e));
            None
        }
    };

    let candidate_reports = candidates
        .iter()
        .map(|(g, s, cv)| CandidateReport {
            group_id: g.clone(),
            model: s.label(),
            mean_score: cv.mean_score,
            fold_scores: cv.fold_scores.clone(),
            skipped_folds: cv.skipped_folds.clone(),
        })
        .collect();

    Ok(TrainReport {
        seed: args.seed,
        task: args.task,
        primary_metric: metric.name().to_string(),
        padded_length,
        train_size: train.len(),
        test_size: test.len(),
        candidates_evaluated: keyed.len(),
        candidates: candidate_reports,
        failed_candidates: failed,
        selected: selected_reports,
        calibration: bundle.calibration.clone(),
        test_metrics,
        warnings,
        bundle: args.out.clone(),
    })
}

/// Bundle predictions against a labeled dataset; returns the metrics and the
/// count of rows that failed to predict.
fn evaluate_bundle(bundle: &EnsembleBundle, data: &Dataset) -> Result<(MetricsReport, usize)> {
    let rows = bundle.predict(&data.sequences);
    match bundle.task {
        Task::Regression => {
            let mut truth = Vec::new();
            let mut preds = Vec::new();
            let mut failed = 0usize;
            for (row, &target) in rows.iter().zip(&data.targets) {
                match row {
                    RowPrediction::Regression { value } => {
                        truth.push(target);
                        preds.push(*value);
                    }
                    _ => failed += 1,
                }
            }
            if truth.is_empty() {
                return Err(Error::EmptyDataset("no test row could be predicted".into()));
            }
            Ok((
                MetricsReport::Regression(aaspectra::evaluation::regression_metrics(
                    &truth, &preds,
                )?),
                failed,
            ))
        }
        Task::Classification => {
            // Map labels by name through the bundle's class table; names the
            // bundle has never seen get fresh ids.
            let mut names: Vec<String> = bundle.class_names.clone();
            let id_of = |name: &str, names: &mut Vec<String>| match names
                .iter()
                .position(|n| n == name)
            {
                Some(i) => i,
                None => {
                    names.push(name.to_string());
                    names.len() - 1
                }
            };
            let mut truth = Vec::new();
            let mut preds = Vec::new();
            let mut failed = 0usize;
            for (row, &target) in rows.iter().zip(&data.targets) {
                match row {
                    RowPrediction::Classification { label, .. } => {
                        let true_name = data.class_names[target as usize].clone();
                        truth.push(id_of(&true_name, &mut names));
                        preds.push(id_of(label, &mut names));
                    }
                    _ => failed += 1,
                }
            }
            if truth.is_empty() {
                return Err(Error::EmptyDataset("no test row could be predicted".into()));
            }
            Ok((
                MetricsReport::Classification(aaspectra::evaluation::classification_metrics(
                    &truth, &preds,
                )?),
                failed,
            ))
        }
    }
}

// -------------------------------------------------------------------- predict

pub struct PredictArgs {
    pub model: PathBuf,
    pub dataset: PathBuf,
    pub seq_col: String,
    pub out: PathBuf,
}

#[derive(Debug, Serialize)]
pub struct PredictReport {
    pub rows: usize,
    pub failed_rows: usize,
    pub out: PathBuf,
}

pub fn run_predict(args: &PredictArgs) -> Result<PredictReport> {
    let bundle = load_bundle(&args.model)?;
    let sequences = read_sequence_column(&args.dataset, &args.seq_col)?;
    if sequences.is_empty() {
        return Err(Error::EmptyDataset("no sequences in dataset".into()));
    }
    let rows = bundle.predict(&sequences);

    let mut writer = csv::Writer::from_path(&args.out)?;
    writer.write_record(["sequence", "prediction", "confidence", "error"])?;
    let mut failed = 0usize;
    for (seq, row) in sequences.iter().zip(&rows) {
        match row {
            RowPrediction::Regression { value } => {
                writer.write_record([seq.as_str(), &format!("{}", value), "", ""])?;
            }
            RowPrediction::Classification { label, scores } => {
                let confidence = scores.iter().cloned().fold(0.0, f64::max);
                writer.write_record([
                    seq.as_str(),
                    label.as_str(),
                    &format!("{:.6}", confidence),
                    "",
                ])?;
            }
            RowPrediction::Error { message } => {
                failed += 1;
                writer.write_record([seq.as_str(), "", "", message.as_str()])?;
            }
        }
    }
    writer.flush()?;

    Ok(PredictReport {
        rows: sequences.len(),
        failed_rows: failed,
        out: args.out.clone(),
    })
}

// ------------------------------------------------------------------- evaluate

pub struct EvaluateArgs {
    pub model: PathBuf,
    pub dataset: PathBuf,
    pub seq_col: String,
    pub target_col: String,
}

#[derive(Debug, Serialize)]
pub struct EvaluateReport {
    pub rows: usize,
    pub failed_rows: usize,
    pub metrics: MetricsReport,
}

pub fn run_evaluate(args: &EvaluateArgs) -> Result<EvaluateReport> {
    let bundle = load_bundle(&args.model)?;
    let schema = DatasetSchema {
        sequence_column: args.seq_col.clone(),
        target_column: args.target_col.clone(),
    };
    let dataset = load_dataset(&args.dataset, &schema, bundle.task)?;
    let (metrics, failed) = evaluate_bundle(&bundle, &dataset)?;
    Ok(EvaluateReport {
        rows: dataset.len(),
        failed_rows: failed,
        metrics,
    })
}

// -------------------------------------------------------------------- gendata

pub struct GendataArgs {
    pub out_dir: PathBuf,
    pub seed: u64,
    pub rows: usize,
}

#[derive(Debug, Serialize)]
pub struct GendataReport {
    pub aaindex: PathBuf,
    pub regression: PathBuf,
    pub classification: PathBuf,
}

/// Write the bundled synthetic demo data: an AAIndex1-format corpus plus a
/// regression and a classification dataset.
pub fn run_gendata(args: &GendataArgs) -> Result<GendataReport> {
    std::fs::create_dir_all(&args.out_dir)?;
    let aaindex = args.out_dir.join("aaindex_demo.txt");
    std::fs::write(&aaindex, synth::synthetic_corpus_text(args.seed))?;

    let regression = args.out_dir.join("regression_demo.csv");
    std::fs::write(
        &regression,
        synth::dataset_csv(
            &synth::synthetic_regression_rows(args.rows, args.seed),
            "sequence",
            "activity",
        ),
    )?;

    let classification = args.out_dir.join("classification_demo.csv");
    std::fs::write(
        &classification,
        synth::dataset_csv(
            &synth::synthetic_classification_rows(args.rows, args.seed.wrapping_add(1)),
            "sequence",
            "label",
        ),
    )?;

    Ok(GendataReport {
        aaindex,
        regression,
        classification,
    })
}
