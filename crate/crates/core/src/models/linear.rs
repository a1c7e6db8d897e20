//! Linear models: ridge regression (closed form) and multinomial logistic
//! regression (full-batch gradient descent).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{normalize_scores, ModelSpec};

/// Solve `A w = b` by Gaussian elimination with partial pivoting.
fn solve_linear_system(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[pivot][col].abs() < 1e-12 {
            return Err(Error::DegenerateTrainingData(
                "singular normal equations".into(),
            ));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut w = vec![0.0; n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in row + 1..n {
            acc -= a[row][k] * w[k];
        }
        w[row] = acc / a[row][row];
    }
    Ok(w)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RidgeModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
}

/// Ridge via the normal equations on centered data; the intercept is not
/// penalized.
pub fn train_ridge(spec: &ModelSpec, x: &[Vec<f64>], y: &[f64]) -> Result<RidgeModel> {
    let lambda = spec.float("regularization", 1.0).max(0.0);
    let n = x.len();
    let dim = x[0].len();
    let x_mean: Vec<f64> = (0..dim)
        .map(|j| x.iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    let y_mean = y.iter().sum::<f64>() / n as f64;

    let mut gram = vec![vec![0.0; dim]; dim];
    let mut moment = vec![0.0; dim];
    for (row, &t) in x.iter().zip(y) {
        let centered: Vec<f64> = row.iter().zip(&x_mean).map(|(v, m)| v - m).collect();
        for j in 0..dim {
            moment[j] += centered[j] * (t - y_mean);
            for k in j..dim {
                gram[j][k] += centered[j] * centered[k];
            }
        }
    }
    for j in 0..dim {
        for k in 0..j {
            gram[j][k] = gram[k][j];
        }
        gram[j][j] += lambda;
    }

    let weights = solve_linear_system(gram, moment)?;
    let intercept = y_mean
        - weights
            .iter()
            .zip(&x_mean)
            .map(|(w, m)| w * m)
            .sum::<f64>();
    Ok(RidgeModel { weights, intercept })
}

impl RidgeModel {
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

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    /// Per-class weight vectors (multinomial softmax).
    pub weights: Vec<Vec<f64>>,
    pub intercepts: Vec<f64>,
}

pub fn train_logistic(
    spec: &ModelSpec,
    x: &[Vec<f64>],
    y: &[f64],
    n_classes: usize,
) -> Result<LogisticModel> {
    let lambda = spec.float("regularization", 1.0).max(0.0);
    let iterations = spec.int("iterations", 300).max(1) as usize;
    let n = x.len();
    let dim = x[0].len();
    let mut weights = vec![vec![0.0; dim]; n_classes];
    let mut intercepts = vec![0.0; n_classes];
    let lr = 1.0;

    for _ in 0..iterations {
        let mut grad_w = vec![vec![0.0; dim]; n_classes];
        let mut grad_b = vec![0.0; n_classes];
        for (row, &t) in x.iter().zip(y) {
            let logits: Vec<f64> = (0..n_classes)
                .map(|c| {
                    intercepts[c]
                        + row
                            .iter()
                            .zip(&weights[c])
                            .map(|(v, w)| v * w)
                            .sum::<f64>()
                })
                .collect();
            let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let exps: Vec<f64> = logits.iter().map(|z| (z - max).exp()).collect();
            let total: f64 = exps.iter().sum();
            for c in 0..n_classes {
                let p = exps[c] / total;
                let indicator = if t as usize == c { 1.0 } else { 0.0 };
                let delta = p - indicator;
                grad_b[c] += delta;
                for (g, v) in grad_w[c].iter_mut().zip(row) {
                    *g += delta * v;
                }
            }
        }
        for c in 0..n_classes {
            intercepts[c] -= lr * grad_b[c] / n as f64;
            for j in 0..dim {
                weights[c][j] -= lr * (grad_w[c][j] / n as f64 + lambda * weights[c][j] / n as f64);
            }
        }
    }

    Ok(LogisticModel {
        weights,
        intercepts,
    })
}

impl LogisticModel {
    pub fn predict_scores(&self, x: &[Vec<f64>]) -> Vec<Vec<f64>> {
        x.iter()
            .map(|row| {
                let logits: Vec<f64> = self
                    .weights
                    .iter()
                    .zip(&self.intercepts)
                    .map(|(w, b)| b + row.iter().zip(w).map(|(v, wj)| v * wj).sum::<f64>())
                    .collect();
                let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let mut scores: Vec<f64> = logits.iter().map(|z| (z - max).exp()).collect();
                normalize_scores(&mut scores);
                scores
            })
            .collect()
    }
}
