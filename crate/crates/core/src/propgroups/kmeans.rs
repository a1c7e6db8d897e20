//! Lloyd's k-means with k-means++ seeding, and the Calinski–Harabasz
//! cluster-quality index.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 300;

/// A clustering of input vectors: per-vector labels in `[0, k)` plus the
/// Calinski–Harabasz score of the partition (`None` when degenerate).
#[derive(Debug, Clone)]
pub struct ClusterPartition {
    pub labels: Vec<usize>,
    pub k: usize,
    pub score: Option<f64>,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn centroid(vectors: &[Vec<f64>], indices: &[usize]) -> Vec<f64> {
    let dim = vectors[0].len();
    let mut c = vec![0.0; dim];
    for &i in indices {
        for (acc, v) in c.iter_mut().zip(&vectors[i]) {
            *acc += v;
        }
    }
    for acc in &mut c {
        *acc /= indices.len() as f64;
    }
    c
}

/// k-means++ initial centers.
fn seed_centers(vectors: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = vectors.len();
    let mut centers = Vec::with_capacity(k);
    centers.push(vectors[rng.gen_range(0..n)].clone());
    let mut dist2: Vec<f64> = vectors
        .iter()
        .map(|v| squared_distance(v, &centers[0]))
        .collect();
    while centers.len() < k {
        let total: f64 = dist2.iter().sum();
        let chosen = if total <= 0.0 {
            // All remaining mass at existing centers; pick the first point
            // not yet used as a center.
            (0..n)
                .find(|&i| centers.iter().all(|c| c != &vectors[i]))
                .unwrap_or(0)
        } else {
            let mut target = rng.gen::<f64>() * total;
            let mut pick = n - 1;
            for (i, d) in dist2.iter().enumerate() {
                target -= d;
                if target <= 0.0 {
                    pick = i;
                    break;
                }
            }
            pick
        };
        centers.push(vectors[chosen].clone());
        for (d, v) in dist2.iter_mut().zip(vectors) {
            let nd = squared_distance(v, centers.last().unwrap());
            if nd < *d {
                *d = nd;
            }
        }
    }
    centers
}

/// Lloyd's algorithm with k-means++ initialization. Deterministic given the
/// seed; converges when assignments stop changing or after 300 iterations.
pub fn kmeans_cluster(vectors: &[Vec<f64>], k: usize, seed: u64) -> Result<ClusterPartition> {
    if vectors.is_empty() {
        return Err(Error::InvalidArgument("k-means on empty input".into()));
    }
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k must be >= 2, got {}", k)));
    }
    let dim = vectors[0].len();
    if dim == 0 || vectors.iter().any(|v| v.len() != dim) {
        return Err(Error::InvalidArgument(
            "all vectors must share one dimension >= 1".into(),
        ));
    }
    let distinct: HashSet<Vec<u64>> = vectors
        .iter()
        .map(|v| v.iter().map(|x| x.to_bits()).collect())
        .collect();
    if k > distinct.len() {
        return Err(Error::InvalidArgument(format!(
            "k = {} exceeds the {} distinct vectors",
            k,
            distinct.len()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centers = seed_centers(vectors, k, &mut rng);
    let mut labels = vec![0usize; vectors.len()];

    for _ in 0..MAX_ITERATIONS {
        let mut changed = false;
        for (i, v) in vectors.iter().enumerate() {
            let best = (0..k)
                .min_by(|&a, &b| {
                    squared_distance(v, &centers[a])
                        .partial_cmp(&squared_distance(v, &centers[b]))
                        .unwrap()
                })
                .unwrap();
            if labels[i] != best {
                labels[i] = best;
                changed = true;
            }
        }
        // Refill empty clusters with the point farthest from its center.
        for cluster in 0..k {
            if !labels.contains(&cluster) {
                let farthest = (0..vectors.len())
                    .max_by(|&a, &b| {
                        squared_distance(&vectors[a], &centers[labels[a]])
                            .partial_cmp(&squared_distance(&vectors[b], &centers[labels[b]]))
                            .unwrap()
                    })
                    .unwrap();
                labels[farthest] = cluster;
                changed = true;
            }
        }
        for cluster in 0..k {
            let members: Vec<usize> = (0..vectors.len()).filter(|&i| labels[i] == cluster).collect();
            if !members.is_empty() {
                centers[cluster] = centroid(vectors, &members);
            }
        }
        if !changed {
            break;
        }
    }

    let score = calinski_harabasz(vectors, &labels, k).ok();
    Ok(ClusterPartition { labels, k, score })
}

/// Calinski–Harabasz index: `[B/(k-1)] / [W/(n-k)]` with `B` the
/// between-cluster and `W` the within-cluster sum of squared distances.
pub fn calinski_harabasz(vectors: &[Vec<f64>], labels: &[usize], k: usize) -> Result<f64> {
    let n = vectors.len();
    if k < 2 {
        return Err(Error::InvalidArgument("CH requires k >= 2".into()));
    }
    if n <= k {
        return Err(Error::InvalidArgument("CH requires n > k".into()));
    }
    if labels.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: labels.len(),
        });
    }
    let all: Vec<usize> = (0..n).collect();
    let global = centroid(vectors, &all);
    let mut within = 0.0;
    let mut between = 0.0;
    for cluster in 0..k {
        let members: Vec<usize> = (0..n).filter(|&i| labels[i] == cluster).collect();
        if members.is_empty() {
            continue;
        }
        let c = centroid(vectors, &members);
        for &i in &members {
            within += squared_distance(&vectors[i], &c);
        }
        between += members.len() as f64 * squared_distance(&c, &global);
    }
    if within == 0.0 {
        return Err(Error::DegeneratePartition);
    }
    Ok((between / (k as f64 - 1.0)) / (within / (n as f64 - k as f64)))
}
