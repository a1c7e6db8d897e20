//! Linear-kernel support vector machines trained by subgradient descent
//! (Pegasos-style), one-vs-rest for multiclass.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::{normalize_scores, ModelSpec};

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmClassifier {
    /// One (weights, bias) margin per class, one-vs-rest.
    pub per_class: Vec<(Vec<f64>, f64)>,
}

/// Pegasos subgradient descent on the hinge loss for one binary problem.
/// The bias is folded in as a constant-1 feature.
fn train_binary_hinge(x: &[Vec<f64>], signs: &[f64], c: f64, seed: u64) -> (Vec<f64>, f64) {
    let n = x.len();
    let dim = x[0].len();
    let lambda = 1.0 / (c * n as f64);
    let mut w = vec![0.0; dim + 1];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let iterations = 100 * n;
    for t in 1..=iterations {
        let i = rng.gen_range(0..n);
        let eta = 1.0 / (lambda * t as f64);
        let margin = signs[i]
            * (w[dim] + x[i].iter().zip(&w).map(|(v, wj)| v * wj).sum::<f64>());
        for wj in w.iter_mut() {
            *wj *= 1.0 - eta * lambda;
        }
        if margin < 1.0 {
            for (wj, v) in w.iter_mut().zip(&x[i]) {
                *wj += eta * signs[i] * v;
            }
            w[dim] += eta * signs[i];
        }
    }
    let b = w.pop().unwrap();
    (w, b)
}

pub fn train_classifier(
    spec: &ModelSpec,
    x: &[Vec<f64>],
    y: &[f64],
    n_classes: usize,
) -> Result<SvmClassifier> {
    let c = spec.float("c", 1.0).max(1e-6);
    let per_class = (0..n_classes)
        .map(|class| {
            let signs: Vec<f64> = y
                .iter()
                .map(|&t| if t as usize == class { 1.0 } else { -1.0 })
                .collect();
            train_binary_hinge(x, &signs, c, spec.seed.wrapping_add(class as u64))
        })
        .collect();
    Ok(SvmClassifier { per_class })
}

impl SvmClassifier {
    pub fn predict_scores(&self, x: &[Vec<f64>]) -> Vec<Vec<f64>> {
        x.iter()
            .map(|row| {
                let mut scores: Vec<f64> = self
                    .per_class
                    .iter()
                    .map(|(w, b)| {
                        sigmoid(b + row.iter().zip(w).map(|(v, wj)| v * wj).sum::<f64>())
                    })
                    .collect();
                normalize_scores(&mut scores);
                scores
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmRegressor {
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub epsilon: f64,
}

/// Epsilon-insensitive linear SVR by deterministic full-batch subgradient
/// descent on `lambda/2 ||w||^2 + mean max(0, |r| - epsilon)`.
pub fn train_regressor(spec: &ModelSpec, x: &[Vec<f64>], y: &[f64]) -> Result<SvmRegressor> {
    let c = spec.float("c", 1.0).max(1e-6);
    let epsilon = spec.float("epsilon", 0.1);
    let n = x.len();
    let dim = x[0].len();
    let lambda = 1.0 / (c * n as f64);
    let mut w = vec![0.0; dim];
    let mut b = y.iter().sum::<f64>() / n as f64;
    let iterations = 2000;
    for t in 0..iterations {
        let eta = 0.5 / ((t + 1) as f64).sqrt();
        let mut grad_w = vec![0.0; dim];
        let mut grad_b = 0.0;
        for (row, &target) in x.iter().zip(y) {
            let pred = b + row.iter().zip(&w).map(|(v, wj)| v * wj).sum::<f64>();
            let residual = target - pred;
            if residual.abs() > epsilon {
                let direction = residual.signum();
                for (g, v) in grad_w.iter_mut().zip(row) {
                    *g -= direction * v;
                }
                grad_b -= direction;
            }
        }
        for (wj, g) in w.iter_mut().zip(&grad_w) {
            *wj -= eta * (g / n as f64 + lambda * *wj);
        }
        b -= eta * grad_b / n as f64;
    }
    Ok(SvmRegressor {
        weights: w,
        intercept: b,
        epsilon,
    })
}

impl SvmRegressor {
    pub fn predict_values(&self, x: &[Vec<f64>]) -> Vec<f64> {
        x.iter()
            .map(|row| {
                self.intercept
                    + row
                        .iter()
                        .zip(&self.weights)
                        .map(|(v, w)| v * w)
                        .sum::<f64>()
            })
            .collect()
    }
}
