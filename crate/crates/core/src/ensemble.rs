//! Outlier-based model selection, score-weighted ensemble assembly, affine
//! calibration, and the serialized prediction bundle.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::{MinMaxScaler, Task};
use crate::encoding::{feature_row, spectral_encode, ResiduePolicy};
use crate::error::{Error, Result};
use crate::evaluation::PrimaryMetric;
use crate::models::{Family, Predictions, TrainedModel};
use crate::propgroups::DescriptorTable;
use crate::stats::{mean, quantile};

/// Current version of the bundle JSON schema.
pub const BUNDLE_SCHEMA_VERSION: u32 = 1;

/// A cross-validated candidate: one trained model tied to the property
/// group whose spectra it consumes, with its oriented validation score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredModel {
    pub group_id: String,
    pub model: TrainedModel,
    pub validation_score: f64,
}

/// Index-level form of [`select_outlier_models`], for callers that want to
/// pick before training full models: each entry is (group id, family,
/// oriented validation score). Returns selected indices, best score first.
pub fn select_outlier_indices(candidates: &[(String, Family, f64)]) -> Result<Vec<usize>> {
    if candidates.is_empty() {
        return Err(Error::EmptyDataset("no candidate models to select from".into()));
    }
    let mut scores: Vec<f64> = candidates.iter().map(|c| c.2).collect();
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::InvalidArgument(
            "non-finite validation score among candidates".into(),
        ));
    }
    scores.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let q1 = quantile(&scores, 0.25);
    let q3 = quantile(&scores, 0.75);
    let fence = q3 + 1.5 * (q3 - q1);

    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| {
        candidates[b]
            .2
            .partial_cmp(&candidates[a].2)
            .unwrap()
            .then(a.cmp(&b))
    });

    let above_fence: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&i| candidates[i].2 > fence)
        .collect();
    let picked: Vec<usize> = if above_fence.is_empty() {
        let top = ((candidates.len() as f64) * 0.05).ceil() as usize;
        order.into_iter().take(top.max(1)).collect()
    } else {
        above_fence
    };

    // Best candidate per (group, family); `picked` is already sorted by
    // descending score so the first hit wins.
    let mut seen = std::collections::HashSet::new();
    let mut selected = Vec::new();
    for i in picked {
        let key = (candidates[i].0.clone(), candidates[i].1);
        if seen.insert(key) {
            selected.push(i);
        }
    }
    Ok(selected)
}

/// Pick the candidates whose scores clear the upper Tukey fence
/// (Q3 + 1.5 IQR over all candidate scores). If nothing clears the fence,
/// fall back to the top max(1, ceil(5%)) by score. The pick is then
/// deduplicated to the best candidate per (group, family) pair.
pub fn select_outlier_models(candidates: &[ScoredModel]) -> Result<Vec<ScoredModel>> {
    let keyed: Vec<(String, Family, f64)> = candidates
        .iter()
        .map(|c| (c.group_id.clone(), c.model.spec.family, c.validation_score))
        .collect();
    Ok(select_outlier_indices(&keyed)?
        .into_iter()
        .map(|i| candidates[i].clone())
        .collect())
}

/// One ensemble constituent with its final voting weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleMember {
    pub group_id: String,
    pub model: TrainedModel,
    pub validation_score: f64,
    pub weight: f64,
}

/// Convert selected models into weighted members. Scores are shifted to be
/// strictly positive (s' = s - min(0, min_j s) + 1e-6) and normalized to
/// sum 1.
pub fn assemble(selected: Vec<ScoredModel>) -> Result<Vec<EnsembleMember>> {
    if selected.is_empty() {
        return Err(Error::EmptyDataset("cannot assemble an empty ensemble".into()));
    }
    let min_score = selected
        .iter()
        .map(|s| s.validation_score)
        .fold(f64::INFINITY, f64::min);
    let shift = -min_score.min(0.0) + 1e-6;
    let total: f64 = selected.iter().map(|s| s.validation_score + shift).sum();
    Ok(selected
        .into_iter()
        .map(|s| EnsembleMember {
            weight: (s.validation_score + shift) / total,
            group_id: s.group_id,
            model: s.model,
            validation_score: s.validation_score,
        })
        .collect())
}

/// Affine calibration: fit `pred = a * true + b` on held-in data and invert
/// it at predict time (`(raw - b) / a`). Regression-only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub a: f64,
    pub b: f64,
}

impl Calibration {
    pub fn fit(y_true: &[f64], y_pred: &[f64]) -> Result<Calibration> {
        if y_true.len() != y_pred.len() {
            return Err(Error::DimensionMismatch {
                expected: y_true.len(),
                actual: y_pred.len(),
            });
        }
        if y_true.len() < 3 {
            return Err(Error::InvalidArgument(
                "calibration needs at least 3 points".into(),
            ));
        }
        let mt = mean(y_true);
        let mp = mean(y_pred);
        let mut sxx = 0.0;
        let mut sxy = 0.0;
        for (t, p) in y_true.iter().zip(y_pred) {
            sxx += (t - mt).powi(2);
            sxy += (t - mt) * (p - mp);
        }
        if sxx == 0.0 {
            return Err(Error::DegenerateTarget(
                "constant truth vector in calibration".into(),
            ));
        }
        let a = sxy / sxx;
        if a.abs() < 1e-6 {
            return Err(Error::DegenerateTarget(format!(
                "calibration slope {} too close to zero to invert",
                a
            )));
        }
        Ok(Calibration { a, b: mp - a * mt })
    }

    pub fn apply(&self, raw: f64) -> f64 {
        (raw - self.b) / self.a
    }
}

/// One row of ensemble output. Failures are reported per row so a single
/// bad sequence does not abort a batch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "outcome")]
pub enum RowPrediction {
    Regression {
        value: f64,
    },
    Classification {
        label: String,
        scores: Vec<f64>,
    },
    Error {
        message: String,
    },
}

/// Everything needed to predict from raw sequences, as one JSON document.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleBundle {
    pub schema_version: u32,
    pub task: Task,
    pub padded_length: usize,
    pub residue_policy: ResiduePolicy,
    pub primary_metric: PrimaryMetric,
    pub descriptor_table: DescriptorTable,
    /// Feature scaler per group id, fit on training spectra.
    pub scalers: BTreeMap<String, MinMaxScaler>,
    pub members: Vec<EnsembleMember>,
    /// Class-id-to-name mapping; empty for regression.
    pub class_names: Vec<String>,
    pub calibration: Option<Calibration>,
}

impl EnsembleBundle {
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != BUNDLE_SCHEMA_VERSION {
            return Err(Error::SchemaVersionMismatch {
                found: self.schema_version,
                expected: BUNDLE_SCHEMA_VERSION,
            });
        }
        if self.members.is_empty() {
            return Err(Error::EmptyDataset("bundle has no members".into()));
        }
        if self.calibration.is_some() && self.task != Task::Regression {
            return Err(Error::CalibrationRegressionOnly);
        }
        if !self.padded_length.is_power_of_two() {
            return Err(Error::InvariantViolation(format!(
                "padded length {} is not a power of two",
                self.padded_length
            )));
        }
        let weight_sum: f64 = self.members.iter().map(|m| m.weight).sum();
        if (weight_sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvariantViolation(format!(
                "member weights sum to {}, expected 1",
                weight_sum
            )));
        }
        for member in &self.members {
            if !self.scalers.contains_key(&member.group_id) {
                return Err(Error::InvariantViolation(format!(
                    "no scaler for group {}",
                    member.group_id
                )));
            }
            if member.model.spec.task != self.task {
                return Err(Error::InvariantViolation(format!(
                    "member task differs from bundle task in group {}",
                    member.group_id
                )));
            }
        }
        Ok(())
    }

    /// Per-group scaled feature row for one sequence.
    fn group_features(&self, seq: &str) -> Result<BTreeMap<String, Vec<f64>>> {
        let descriptors = self.descriptor_table.descriptors()?;
        let mut rows = BTreeMap::new();
        for descriptor in &descriptors {
            if let Some(scaler) = self.scalers.get(&descriptor.group_id) {
                let spectra = spectral_encode(
                    seq,
                    std::slice::from_ref(descriptor),
                    self.padded_length,
                    self.residue_policy,
                )?;
                rows.insert(descriptor.group_id.clone(), scaler.apply_row(&feature_row(&spectra))?);
            }
        }
        Ok(rows)
    }

    fn predict_row(&self, seq: &str) -> Result<RowPrediction> {
        let features = self.group_features(seq)?;
        match self.task {
            Task::Regression => {
                let mut value = 0.0;
                for member in &self.members {
                    let row = features.get(&member.group_id).ok_or_else(|| {
                        Error::InvariantViolation(format!(
                            "missing features for group {}",
                            member.group_id
                        ))
                    })?;
                    match member.model.predict(std::slice::from_ref(row))? {
                        Predictions::Regression(v) => value += member.weight * v[0],
                        _ => {
                            return Err(Error::InvariantViolation(
                                "classification output from regression member".into(),
                            ))
                        }
                    }
                }
                if let Some(calibration) = &self.calibration {
                    value = calibration.apply(value);
                }
                Ok(RowPrediction::Regression { value })
            }
            Task::Classification => {
                let n_classes = self.members[0].model.n_classes;
                let mut combined = vec![0.0; n_classes];
                for member in &self.members {
                    let row = features.get(&member.group_id).ok_or_else(|| {
                        Error::InvariantViolation(format!(
                            "missing features for group {}",
                            member.group_id
                        ))
                    })?;
                    match member.model.predict(std::slice::from_ref(row))? {
                        Predictions::Classification { scores, .. } => {
                            for (acc, s) in combined.iter_mut().zip(&scores[0]) {
                                *acc += member.weight * s;
                            }
                        }
                        _ => {
                            return Err(Error::InvariantViolation(
                                "regression output from classification member".into(),
                            ))
                        }
                    }
                }
                let total: f64 = combined.iter().sum();
                if total > 0.0 {
                    for s in combined.iter_mut() {
                        *s /= total;
                    }
                }
                let mut best = 0;
                for (i, &s) in combined.iter().enumerate() {
                    if s > combined[best] {
                        best = i;
                    }
                }
                let label = self
                    .class_names
                    .get(best)
                    .cloned()
                    .unwrap_or_else(|| best.to_string());
                Ok(RowPrediction::Classification {
                    label,
                    scores: combined,
                })
            }
        }
    }

    /// Weighted soft vote (classification) or weighted sum plus calibration
    /// (regression), one outcome per sequence.
    pub fn predict(&self, sequences: &[String]) -> Vec<RowPrediction> {
        sequences
            .iter()
            .map(|seq| match self.predict_row(seq) {
                Ok(row) => row,
                Err(e) => RowPrediction::Error {
                    message: e.to_string(),
                },
            })
            .collect()
    }

    /// Raw (uncalibrated for regression) ensemble predictions on
    /// already-scaled per-group feature rows, used during training.
    pub fn combine_scaled(
        &self,
        features_by_group: &BTreeMap<String, Vec<Vec<f64>>>,
        n_rows: usize,
    ) -> Result<Vec<f64>> {
        if self.task != Task::Regression {
            return Err(Error::CalibrationRegressionOnly);
        }
        let mut out = vec![0.0; n_rows];
        for member in &self.members {
            let rows = features_by_group.get(&member.group_id).ok_or_else(|| {
                Error::InvariantViolation(format!("missing features for group {}", member.group_id))
            })?;
            match member.model.predict(rows)? {
                Predictions::Regression(values) => {
                    for (acc, v) in out.iter_mut().zip(&values) {
                        *acc += member.weight * v;
                    }
                }
                _ => {
                    return Err(Error::InvariantViolation(
                        "classification output from regression member".into(),
                    ))
                }
            }
        }
        Ok(out)
    }
}

pub fn save_bundle(bundle: &EnsembleBundle, path: &Path) -> Result<()> {
    bundle.validate()?;
    let file = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(std::io::BufWriter::new(file), bundle)?;
    Ok(())
}

pub fn load_bundle(path: &Path) -> Result<EnsembleBundle> {
    let text = std::fs::read_to_string(path)?;
    // Check the version before full decoding so old bundles fail with a
    // version message instead of a field error.
    let probe: serde_json::Value = serde_json::from_str(&text)?;
    let found = probe
        .get("schema_version")
        .and_then(|v| v.as_u64())
        .unwrap_or(0) as u32;
    if found != BUNDLE_SCHEMA_VERSION {
        return Err(Error::SchemaVersionMismatch {
            found,
            expected: BUNDLE_SCHEMA_VERSION,
        });
    }
    let bundle: EnsembleBundle = serde_json::from_str(&text)?;
    bundle.validate()?;
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{train_model, Family, ModelSpec, ParamValue};
    use crate::propgroups::{AminoAcidDescriptor, DescriptorTable, Keyword, PropertyGroup};
    use proptest::prelude::*;

    fn scored(group: &str, family: Family, score: f64) -> ScoredModel {
        let spec = ModelSpec::new(family, Task::Regression, 0);
        let x = vec![vec![0.0], vec![1.0]];
        let y = vec![0.0, 1.0];
        ScoredModel {
            group_id: group.into(),
            model: train_model(&spec, &x, &y).unwrap(),
            validation_score: score,
        }
    }

    #[test]
    fn tukey_fence_picks_the_clear_outlier() {
        // Q1 = 0.5075, Q3 = 0.615, fence = 0.615 + 1.5 * 0.1075 = 0.77625;
        // only 0.90 clears it.
        let candidates = vec![
            scored("ID-01", Family::Knn, 0.50),
            scored("ID-02", Family::Knn, 0.51),
            scored("ID-03", Family::Knn, 0.52),
            scored("ID-04", Family::Knn, 0.90),
        ];
        let selected = select_outlier_models(&candidates).unwrap();
        assert_eq!(selected.len(), 1);
        assert_eq!(selected[0].group_id, "ID-04");
    }

    #[test]
    fn flat_scores_fall_back_to_top_slice() {
        let candidates: Vec<ScoredModel> = (0..10)
            .map(|i| scored(&format!("ID-{:02}", i + 1), Family::Knn, 0.5))
            .collect();
        let selected = select_outlier_models(&candidates).unwrap();
        // ceil(5% of 10) = 1, ties broken by candidate order.
        assert_eq!(selected.len(), 1);
        assert_eq!(selected[0].group_id, "ID-01");
    }

    #[test]
    fn duplicate_group_family_keeps_the_best() {
        let candidates = vec![
            scored("ID-01", Family::Knn, 0.30),
            scored("ID-01", Family::Knn, 0.95),
            scored("ID-01", Family::Linear, 0.94),
            scored("ID-02", Family::Knn, 0.93),
            scored("ID-03", Family::Knn, 0.31),
            scored("ID-04", Family::Knn, 0.29),
            scored("ID-05", Family::Knn, 0.32),
        ];
        let selected = select_outlier_models(&candidates).unwrap();
        let knn_id01: Vec<&ScoredModel> = selected
            .iter()
            .filter(|s| s.group_id == "ID-01" && s.model.spec.family == Family::Knn)
            .collect();
        assert_eq!(knn_id01.len(), 1);
        assert_eq!(knn_id01[0].validation_score, 0.95);
    }

    #[test]
    fn weights_follow_the_shift_rule() {
        let members = assemble(vec![
            scored("ID-01", Family::Knn, -1.0),
            scored("ID-02", Family::Knn, 2.0),
        ])
        .unwrap();
        // shifted scores: 1e-6 and 3 + 1e-6.
        let total = 3.0 + 2e-6;
        assert!((members[0].weight - 1e-6 / total).abs() < 1e-15);
        assert!((members[1].weight - (3.0 + 1e-6) / total).abs() < 1e-15);
        assert!((members[0].weight + members[1].weight - 1.0).abs() < 1e-12);
    }

    #[test]
    fn calibration_recovers_known_affine_bias() {
        let y_true: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let y_pred: Vec<f64> = y_true.iter().map(|t| 1.5 * t - 2.0).collect();
        let cal = Calibration::fit(&y_true, &y_pred).unwrap();
        assert!((cal.a - 1.5).abs() < 1e-12);
        assert!((cal.b + 2.0).abs() < 1e-12);
        for (t, p) in y_true.iter().zip(&y_pred) {
            assert!((cal.apply(*p) - t).abs() < 1e-12);
        }
    }

    #[test]
    fn flat_calibration_slope_rejected() {
        let y_true = [1.0, 2.0, 3.0, 4.0];
        let y_pred = [5.0, 5.0, 5.0, 5.0];
        assert!(matches!(
            Calibration::fit(&y_true, &y_pred),
            Err(Error::DegenerateTarget(_))
        ));
        assert!(Calibration::fit(&[1.0, 2.0], &[1.0, 2.0]).is_err());
    }

    fn toy_bundle() -> EnsembleBundle {
        // One group, two distinct positive weights (magnitude spectra drop
        // sign, so +-1 weights would alias); model trained on spectra of
        // short A/V sequences.
        let mut weights = vec![0.0; 20];
        weights[0] = 1.0; // A
        weights[17] = 3.0; // V
        let descriptor = AminoAcidDescriptor {
            group_id: "ID-01".into(),
            weights,
            explained_variance: 0.9,
        };
        let group = PropertyGroup {
            group_id: "ID-01".into(),
            keyword: Keyword::AlphaStructure,
            members: Vec::new(),
        };
        let table = DescriptorTable::from_groups(&[(group, descriptor.clone())]);

        let train_seqs = ["AAAA", "AAVV", "VVVV", "AVAV", "AAAV", "VVVA"];
        let targets: Vec<f64> = train_seqs
            .iter()
            .map(|s| s.chars().filter(|&c| c == 'A').count() as f64)
            .collect();
        let raw: Vec<Vec<f64>> = train_seqs
            .iter()
            .map(|s| {
                feature_row(&spectral_encode(s, std::slice::from_ref(&descriptor), 4, ResiduePolicy::Error).unwrap())
            })
            .collect();
        let scaler = MinMaxScaler::fit(&raw).unwrap();
        let scaled = scaler.apply(&raw).unwrap();
        let spec = ModelSpec::new(Family::Knn, Task::Regression, 0)
            .with("k", ParamValue::Int(1));
        let model = train_model(&spec, &scaled, &targets).unwrap();

        let members = assemble(vec![ScoredModel {
            group_id: "ID-01".into(),
            model,
            validation_score: 0.9,
        }])
        .unwrap();
        let mut scalers = BTreeMap::new();
        scalers.insert("ID-01".to_string(), scaler);
        EnsembleBundle {
            schema_version: BUNDLE_SCHEMA_VERSION,
            task: Task::Regression,
            padded_length: 4,
            residue_policy: ResiduePolicy::Error,
            primary_metric: PrimaryMetric::Pearson,
            descriptor_table: table,
            scalers,
            members,
            class_names: Vec::new(),
            calibration: None,
        }
    }

    #[test]
    fn single_member_ensemble_memorizes_training_rows() {
        let bundle = toy_bundle();
        bundle.validate().unwrap();
        let out = bundle.predict(&["AAAA".to_string(), "VVVV".to_string()]);
        match (&out[0], &out[1]) {
            (RowPrediction::Regression { value: a }, RowPrediction::Regression { value: v }) => {
                assert!((a - 4.0).abs() < 1e-9);
                assert!(v.abs() < 1e-9);
            }
            other => panic!("unexpected {:?}", other),
        }
    }

    #[test]
    fn bad_row_reports_error_without_aborting_batch() {
        let bundle = toy_bundle();
        let out = bundle.predict(&["AAXA".to_string(), "AAAA".to_string()]);
        assert!(matches!(&out[0], RowPrediction::Error { message } if message.contains("X")));
        assert!(matches!(&out[1], RowPrediction::Regression { .. }));
    }

    #[test]
    fn bundle_round_trip_is_bit_identical() {
        let bundle = toy_bundle();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bundle.json");
        save_bundle(&bundle, &path).unwrap();
        let reloaded = load_bundle(&path).unwrap();
        let seqs: Vec<String> = ["AAAA", "AVAV", "VAAA", "VVAA"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(bundle.predict(&seqs), reloaded.predict(&seqs));
    }

    #[test]
    fn truncated_bundle_fails_to_load() {
        let bundle = toy_bundle();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bundle.json");
        save_bundle(&bundle, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        std::fs::write(&path, &text[..text.len() / 2]).unwrap();
        assert!(load_bundle(&path).is_err());
    }

    #[test]
    fn future_schema_version_rejected_by_name() {
        let bundle = toy_bundle();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bundle.json");
        save_bundle(&bundle, &path).unwrap();
        let text = std::fs::read_to_string(&path)
            .unwrap()
            .replacen("\"schema_version\": 1", "\"schema_version\": 99", 1);
        std::fs::write(&path, text).unwrap();
        assert!(matches!(
            load_bundle(&path),
            Err(Error::SchemaVersionMismatch { found: 99, .. })
        ));
    }

    #[test]
    fn calibration_on_classification_bundle_rejected() {
        let mut bundle = toy_bundle();
        bundle.task = Task::Classification;
        bundle.calibration = Some(Calibration { a: 1.0, b: 0.0 });
        assert!(matches!(
            bundle.validate(),
            Err(Error::CalibrationRegressionOnly)
        ));
    }

    proptest! {
        #[test]
        fn assembled_weights_sum_to_one_and_are_positive(
            raw_scores in proptest::collection::vec(-5.0f64..5.0, 1..12)
        ) {
            let candidates: Vec<ScoredModel> = raw_scores
                .iter()
                .enumerate()
                .map(|(i, &s)| scored(&format!("ID-{:02}", i + 1), Family::Knn, s))
                .collect();
            let members = assemble(candidates).unwrap();
            let total: f64 = members.iter().map(|m| m.weight).sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!(members.iter().all(|m| m.weight > 0.0));
            // Ranking by weight matches ranking by score.
            for pair in members.windows(2) {
                if pair[0].validation_score > pair[1].validation_score {
                    prop_assert!(pair[0].weight > pair[1].weight);
                }
            }
        }

        #[test]
        fn selection_never_returns_empty_or_worse_than_median(
            raw_scores in proptest::collection::vec(0.0f64..1.0, 3..20)
        ) {
            let candidates: Vec<ScoredModel> = raw_scores
                .iter()
                .enumerate()
                .map(|(i, &s)| scored(&format!("G{}", i), Family::Knn, s))
                .collect();
            let selected = select_outlier_models(&candidates).unwrap();
            prop_assert!(!selected.is_empty());
            let mut sorted = raw_scores.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let median = quantile(&sorted, 0.5);
            for s in &selected {
                prop_assert!(s.validation_score >= median);
            }
        }
    }
}
