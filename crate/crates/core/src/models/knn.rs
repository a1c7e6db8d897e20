//! k-nearest neighbors. The fitted state stores the training matrix.

use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::{normalize_scores, ModelSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KnnWeights {
    Uniform,
    Distance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMetric {
    Euclidean,
    Manhattan,
}

impl DistanceMetric {
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            DistanceMetric::Euclidean => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            DistanceMetric::Manhattan => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub weights: KnnWeights,
    pub metric: DistanceMetric,
    pub x: Vec<Vec<f64>>,
    pub y: Vec<f64>,
}

pub fn train(spec: &ModelSpec, x: &[Vec<f64>], y: &[f64]) -> Result<KnnModel> {
    let k = spec.int("k", 5).max(1) as usize;
    let weights = match spec.text("weights", "uniform").as_str() {
        "distance" => KnnWeights::Distance,
        _ => KnnWeights::Uniform,
    };
    let metric = match spec.text("metric", "euclidean").as_str() {
        "manhattan" => DistanceMetric::Manhattan,
        _ => DistanceMetric::Euclidean,
    };
    Ok(KnnModel {
        k: k.min(x.len()),
        weights,
        metric,
        x: x.to_vec(),
        y: y.to_vec(),
    })
}

impl KnnModel {
    /// The k nearest (distance, weight, target) triples for one query.
    /// If any neighbor coincides with the query, only exact matches vote.
    fn neighbors(&self, query: &[f64]) -> Vec<(f64, f64)> {
        let mut dist: Vec<(f64, usize)> = self
            .x
            .iter()
            .enumerate()
            .map(|(i, row)| (self.metric.distance(query, row), i))
            .collect();
        dist.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        let nearest = &dist[..self.k];
        if nearest.iter().any(|(d, _)| *d == 0.0) {
            return nearest
                .iter()
                .filter(|(d, _)| *d == 0.0)
                .map(|(_, i)| (1.0, self.y[*i]))
                .collect();
        }
        nearest
            .iter()
            .map(|(d, i)| {
                let w = match self.weights {
                    KnnWeights::Uniform => 1.0,
                    KnnWeights::Distance => 1.0 / d,
                };
                (w, self.y[*i])
            })
            .collect()
    }

    pub fn predict_values(&self, x: &[Vec<f64>]) -> Vec<f64> {
        x.iter()
            .map(|query| {
                let neighbors = self.neighbors(query);
                let total: f64 = neighbors.iter().map(|(w, _)| w).sum();
                neighbors.iter().map(|(w, t)| w * t).sum::<f64>() / total
            })
            .collect()
    }

    pub fn predict_scores(&self, x: &[Vec<f64>], n_classes: usize) -> Vec<Vec<f64>> {
        x.iter()
            .map(|query| {
                let mut scores = vec![0.0; n_classes];
                for (w, t) in self.neighbors(query) {
                    scores[t as usize] += w;
                }
                normalize_scores(&mut scores);
                scores
            })
            .collect()
    }
}
