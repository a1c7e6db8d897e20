//! Dataset ingestion, cleaning, train/test splitting, and min-max scaling.

use std::collections::HashMap;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Regression,
    Classification,
}

impl std::str::FromStr for Task {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "regression" => Ok(Task::Regression),
            "classification" => Ok(Task::Classification),
            other => Err(Error::InvalidArgument(format!(
                "unknown task '{}' (expected classification|regression)",
                other
            ))),
        }
    }
}

/// Cleaned rows of one dataset. Classification targets are contiguous class
/// ids (stored as f64) indexing into `class_names`, assigned in
/// first-appearance order.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub sequences: Vec<String>,
    pub targets: Vec<f64>,
    pub task: Task,
    pub class_names: Vec<String>,
    pub dropped_count: usize,
    pub warnings: Vec<String>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            sequences: indices.iter().map(|&i| self.sequences[i].clone()).collect(),
            targets: indices.iter().map(|&i| self.targets[i]).collect(),
            task: self.task,
            class_names: self.class_names.clone(),
            dropped_count: 0,
            warnings: Vec::new(),
        }
    }
}

/// Which CSV columns hold the sequence and the response variable.
#[derive(Debug, Clone)]
pub struct DatasetSchema {
    pub sequence_column: String,
    pub target_column: String,
}

/// Load a CSV dataset, dropping rows with an empty sequence or an
/// empty/NaN target.
pub fn load_dataset(path: &Path, schema: &DatasetSchema, task: Task) -> Result<Dataset> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    let seq_idx = headers
        .iter()
        .position(|h| h == schema.sequence_column)
        .ok_or_else(|| Error::MissingColumn(schema.sequence_column.clone()))?;
    let target_idx = headers
        .iter()
        .position(|h| h == schema.target_column)
        .ok_or_else(|| Error::MissingColumn(schema.target_column.clone()))?;
    load_rows(
        reader
            .records()
            .map(|r| r.map_err(Error::from))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .map(|r| {
                (
                    r.get(seq_idx).unwrap_or("").trim().to_string(),
                    r.get(target_idx).unwrap_or("").trim().to_string(),
                )
            }),
        task,
    )
}

/// Build a dataset from already-extracted (sequence, raw target) pairs.
pub fn load_rows<I>(rows: I, task: Task) -> Result<Dataset>
where
    I: IntoIterator<Item = (String, String)>,
{
    let mut sequences = Vec::new();
    let mut targets = Vec::new();
    let mut class_names: Vec<String> = Vec::new();
    let mut class_ids: HashMap<String, usize> = HashMap::new();
    let mut dropped_count = 0;

    for (sequence, raw_target) in rows {
        if sequence.is_empty() || raw_target.is_empty() {
            dropped_count += 1;
            continue;
        }
        let target = match task {
            Task::Regression => match raw_target.parse::<f64>() {
                Ok(v) if v.is_finite() => v,
                _ => {
                    dropped_count += 1;
                    continue;
                }
            },
            Task::Classification => {
                let next_id = class_names.len();
                let id = *class_ids.entry(raw_target.clone()).or_insert_with(|| {
                    class_names.push(raw_target.clone());
                    next_id
                });
                id as f64
            }
        };
        sequences.push(sequence);
        targets.push(target);
    }

    if sequences.is_empty() {
        return Err(Error::EmptyDataset(
            "no rows survived cleaning".into(),
        ));
    }

    // Duplicate sequences with conflicting targets are kept but flagged.
    let mut warnings = Vec::new();
    let mut first_target: HashMap<&str, f64> = HashMap::new();
    for (seq, &t) in sequences.iter().zip(&targets) {
        match first_target.get(seq.as_str()) {
            Some(&prev) if prev != t => {
                warnings.push(format!("duplicate sequence with conflicting targets: {}", seq));
            }
            None => {
                first_target.insert(seq, t);
            }
            _ => {}
        }
    }

    Ok(Dataset {
        sequences,
        targets,
        task,
        class_names,
        dropped_count,
        warnings,
    })
}

/// Deterministic shuffled train/test split. Classification splits are
/// stratified when requested: per-class test counts use floor allocation
/// with largest-remainder top-up; singleton classes stay in train.
pub fn split_dataset(
    ds: &Dataset,
    test_fraction: f64,
    seed: u64,
    stratify: bool,
) -> Result<(Dataset, Dataset)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "test fraction must be in (0,1), got {}",
            test_fraction
        )));
    }
    if ds.is_empty() {
        return Err(Error::EmptyDataset("cannot split an empty dataset".into()));
    }
    let n = ds.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let test_indices: Vec<usize> = if stratify && ds.task == Task::Classification {
        let mut by_class: HashMap<usize, Vec<usize>> = HashMap::new();
        for (i, &t) in ds.targets.iter().enumerate() {
            by_class.entry(t as usize).or_default().push(i);
        }
        let mut classes: Vec<usize> = by_class.keys().copied().collect();
        classes.sort_unstable();

        let eligible: Vec<usize> = classes
            .iter()
            .copied()
            .filter(|c| by_class[c].len() > 1)
            .collect();
        let total_test = ((n as f64) * test_fraction).round() as usize;
        let total_test = total_test.min(n.saturating_sub(1)).max(1);

        // Floor allocation per class, then top-up by largest remainder.
        let mut alloc: HashMap<usize, usize> = HashMap::new();
        let mut remainders: Vec<(f64, usize)> = Vec::new();
        let mut assigned = 0usize;
        for &c in &eligible {
            let ideal = by_class[&c].len() as f64 * test_fraction;
            let base = (ideal.floor() as usize).min(by_class[&c].len() - 1);
            alloc.insert(c, base);
            assigned += base;
            remainders.push((ideal - ideal.floor(), c));
        }
        remainders.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
        let mut remaining = total_test.saturating_sub(assigned);
        for &(_, c) in remainders.iter().cycle().take(remainders.len() * 2) {
            if remaining == 0 {
                break;
            }
            let cap = by_class[&c].len() - 1;
            let slot = alloc.get_mut(&c).unwrap();
            if *slot < cap {
                *slot += 1;
                remaining -= 1;
            }
        }

        let mut test = Vec::new();
        for &c in &classes {
            let mut members = by_class[&c].clone();
            members.shuffle(&mut rng);
            let take = alloc.get(&c).copied().unwrap_or(0);
            test.extend(members.into_iter().take(take));
        }
        test
    } else {
        let mut indices: Vec<usize> = (0..n).collect();
        indices.shuffle(&mut rng);
        let n_test = (((n as f64) * test_fraction).round() as usize)
            .min(n - 1)
            .max(1);
        indices.into_iter().take(n_test).collect()
    };

    let in_test: Vec<bool> = {
        let mut mask = vec![false; n];
        for &i in &test_indices {
            mask[i] = true;
        }
        mask
    };
    let train_indices: Vec<usize> = (0..n).filter(|&i| !in_test[i]).collect();
    let mut test_sorted = test_indices.clone();
    test_sorted.sort_unstable();

    let mut train = ds.subset(&train_indices);
    let test = ds.subset(&test_sorted);
    if stratify && ds.task == Task::Classification {
        for (c, name) in ds.class_names.iter().enumerate() {
            let count = ds.targets.iter().filter(|&&t| t as usize == c).count();
            if count == 1 {
                train
                    .warnings
                    .push(format!("class '{}' has a single member; kept in train", name));
            }
        }
    }
    Ok((train, test))
}

/// Per-feature min-max scaler fitted on training features only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl MinMaxScaler {
    pub fn fit(features: &[Vec<f64>]) -> Result<MinMaxScaler> {
        if features.is_empty() {
            return Err(Error::EmptyDataset("cannot fit scaler on no rows".into()));
        }
        let dim = features[0].len();
        let mut min = vec![f64::INFINITY; dim];
        let mut max = vec![f64::NEG_INFINITY; dim];
        for row in features {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: row.len(),
                });
            }
            for j in 0..dim {
                min[j] = min[j].min(row[j]);
                max[j] = max[j].max(row[j]);
            }
        }
        Ok(MinMaxScaler { min, max })
    }

    /// `(x - min)/(max - min)`, constant features map to 0, out-of-range
    /// values clip to [0, 1].
    pub fn apply(&self, features: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        features.iter().map(|row| self.apply_row(row)).collect()
    }

    pub fn apply_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.min.len() {
            return Err(Error::DimensionMismatch {
                expected: self.min.len(),
                actual: row.len(),
            });
        }
        Ok(row
            .iter()
            .enumerate()
            .map(|(j, &x)| {
                let span = self.max[j] - self.min[j];
                if span == 0.0 {
                    0.0
                } else {
                    ((x - self.min[j]) / span).clamp(0.0, 1.0)
                }
            })
            .collect())
    }
}
