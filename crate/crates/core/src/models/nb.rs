//! Gaussian and Bernoulli naive Bayes classifiers.

use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::normalize_scores;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianNb {
    pub log_priors: Vec<f64>,
    pub means: Vec<Vec<f64>>,
    pub variances: Vec<Vec<f64>>,
}

pub fn train_gaussian(x: &[Vec<f64>], y: &[f64], n_classes: usize) -> Result<GaussianNb> {
    let dim = x[0].len();
    let n = x.len() as f64;
    let mut counts = vec![0.0; n_classes];
    let mut means = vec![vec![0.0; dim]; n_classes];
    for (row, &t) in x.iter().zip(y) {
        let c = t as usize;
        counts[c] += 1.0;
        for (m, v) in means[c].iter_mut().zip(row) {
            *m += v;
        }
    }
    for (c, mean) in means.iter_mut().enumerate() {
        for m in mean.iter_mut() {
            *m /= counts[c];
        }
    }
    let mut variances = vec![vec![0.0; dim]; n_classes];
    for (row, &t) in x.iter().zip(y) {
        let c = t as usize;
        for j in 0..dim {
            variances[c][j] += (row[j] - means[c][j]).powi(2);
        }
    }
    // Variance floor keeps constant features from collapsing the density.
    let mut global_max_var: f64 = 0.0;
    for (c, var) in variances.iter_mut().enumerate() {
        for v in var.iter_mut() {
            *v /= counts[c];
            global_max_var = global_max_var.max(*v);
        }
    }
    let floor = (global_max_var * 1e-9).max(1e-12);
    for var in &mut variances {
        for v in var.iter_mut() {
            *v = v.max(floor);
        }
    }
    let log_priors = counts.iter().map(|&c| (c / n).ln()).collect();
    Ok(GaussianNb {
        log_priors,
        means,
        variances,
    })
}

impl GaussianNb {
    pub fn predict_scores(&self, x: &[Vec<f64>]) -> Vec<Vec<f64>> {
        x.iter()
            .map(|row| {
                let log_post: Vec<f64> = self
                    .log_priors
                    .iter()
                    .enumerate()
                    .map(|(c, lp)| {
                        lp + row
                            .iter()
                            .enumerate()
                            .map(|(j, &v)| {
                                let var = self.variances[c][j];
                                -0.5 * ((2.0 * std::f64::consts::PI * var).ln()
                                    + (v - self.means[c][j]).powi(2) / var)
                            })
                            .sum::<f64>()
                    })
                    .collect();
                let max = log_post.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let mut scores: Vec<f64> = log_post.iter().map(|lp| (lp - max).exp()).collect();
                normalize_scores(&mut scores);
                scores
            })
            .collect()
    }
}

/// Bernoulli naive Bayes over features binarized at 0.5 (inputs are
/// min-max scaled to [0,1]), with Laplace smoothing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BernoulliNb {
    pub log_priors: Vec<f64>,
    /// log P(feature on | class) and its complement.
    pub log_on: Vec<Vec<f64>>,
    pub log_off: Vec<Vec<f64>>,
    pub threshold: f64,
}

pub fn train_bernoulli(x: &[Vec<f64>], y: &[f64], n_classes: usize) -> Result<BernoulliNb> {
    let dim = x[0].len();
    let threshold = 0.5;
    let mut counts = vec![0.0; n_classes];
    let mut on_counts = vec![vec![0.0; dim]; n_classes];
    for (row, &t) in x.iter().zip(y) {
        let c = t as usize;
        counts[c] += 1.0;
        for (acc, &v) in on_counts[c].iter_mut().zip(row) {
            if v > threshold {
                *acc += 1.0;
            }
        }
    }
    let n = x.len() as f64;
    let log_priors = counts.iter().map(|&c| (c / n).ln()).collect();
    let mut log_on = vec![vec![0.0; dim]; n_classes];
    let mut log_off = vec![vec![0.0; dim]; n_classes];
    for c in 0..n_classes {
        for j in 0..dim {
            let p = (on_counts[c][j] + 1.0) / (counts[c] + 2.0);
            log_on[c][j] = p.ln();
            log_off[c][j] = (1.0 - p).ln();
        }
    }
    Ok(BernoulliNb {
        log_priors,
        log_on,
        log_off,
        threshold,
    })
}

impl BernoulliNb {
    pub fn predict_scores(&self, x: &[Vec<f64>]) -> Vec<Vec<f64>> {
        x.iter()
            .map(|row| {
                let log_post: Vec<f64> = self
                    .log_priors
                    .iter()
                    .enumerate()
                    .map(|(c, lp)| {
                        lp + row
                            .iter()
                            .enumerate()
                            .map(|(j, &v)| {
                                if v > self.threshold {
                                    self.log_on[c][j]
                                } else {
                                    self.log_off[c][j]
                                }
                            })
                            .sum::<f64>()
                    })
                    .collect();
                let max = log_post.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let mut scores: Vec<f64> = log_post.iter().map(|lp| (lp - max).exp()).collect();
                normalize_scores(&mut scores);
                scores
            })
            .collect()
    }
}
