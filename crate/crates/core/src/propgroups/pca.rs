//! Group compression: first principal component of a property group's
//! standardized 20 x m value matrix, via cyclic Jacobi eigendecomposition.

use crate::error::{Error, Result};
use crate::stats::{mean, sample_std};

use super::{AminoAcidDescriptor, PropertyGroup};

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns (eigenvalues, eigenvectors as columns), sorted by descending
/// eigenvalue.
pub fn jacobi_eigen(matrix: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();

    let off_diagonal_norm = |a: &[Vec<f64>]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += a[i][j] * a[i][j];
            }
        }
        s.sqrt()
    };

    for _sweep in 0..100 {
        if off_diagonal_norm(&a) < 1e-12 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-15 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].partial_cmp(&a[i][i]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i][i]).collect();
    let eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row][col]).collect())
        .collect();
    (eigenvalues, eigenvectors)
}

/// Compress a property group into one 20-entry descriptor: standardize each
/// member column to zero mean and unit variance, eigendecompose the column
/// covariance, and project the 20 residue rows onto the leading eigenvector.
/// The Alanine weight is made non-negative by flipping the eigenvector if
/// needed.
pub fn group_pca_descriptor(group: &PropertyGroup) -> Result<AminoAcidDescriptor> {
    let m = group.members.len();
    if m < 2 {
        return Err(Error::InvalidArgument(format!(
            "group {} has {} member(s); PCA needs at least 2",
            group.group_id, m
        )));
    }

    // columns[j] is member j's 20 values, standardized.
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(m);
    for member in &group.members {
        let values = member.complete_values()?;
        let mu = mean(&values);
        let sigma = sample_std(&values);
        if sigma == 0.0 {
            return Err(Error::InvariantViolation(format!(
                "zero-variance column {} reached PCA (normality filter should have removed it)",
                member.accession
            )));
        }
        columns.push(values.iter().map(|v| (v - mu) / sigma).collect());
    }

    // m x m covariance of the standardized columns (a correlation matrix).
    let mut cov = vec![vec![0.0; m]; m];
    for i in 0..m {
        for j in i..m {
            let c: f64 = columns[i]
                .iter()
                .zip(&columns[j])
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / 19.0;
            cov[i][j] = c;
            cov[j][i] = c;
        }
    }

    let (eigenvalues, eigenvectors) = jacobi_eigen(&cov);
    let total: f64 = eigenvalues.iter().map(|l| l.max(0.0)).sum();
    let leading = &eigenvectors[0];
    let explained_variance = (eigenvalues[0].max(0.0) / total).min(1.0);

    let mut weights: Vec<f64> = (0..20)
        .map(|row| columns.iter().zip(leading).map(|(col, w)| col[row] * w).sum())
        .collect();
    if weights[0] < 0.0 {
        for w in &mut weights {
            *w = -*w;
        }
    }

    Ok(AminoAcidDescriptor {
        group_id: group.group_id.clone(),
        weights,
        explained_variance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aaindex::PropertyRecord;
    use crate::propgroups::Keyword;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn record(accession: &str, values: Vec<f64>) -> PropertyRecord {
        PropertyRecord {
            accession: accession.into(),
            description: "p".into(),
            values: values.into_iter().map(Some).collect(),
        }
    }

    fn group_of(members: Vec<PropertyRecord>) -> PropertyGroup {
        PropertyGroup {
            group_id: "ID-01".into(),
            keyword: Keyword::AlphaStructure,
            members,
        }
    }

    fn base_values() -> Vec<f64> {
        (0..20).map(|i| (i as f64 * 0.7).sin() * 3.0 + i as f64 * 0.2).collect()
    }

    #[test]
    fn identical_members_explain_everything() {
        let g = group_of(vec![record("P1", base_values()), record("P2", base_values())]);
        let d = group_pca_descriptor(&g).unwrap();
        assert!((d.explained_variance - 1.0).abs() < 1e-9);
        assert!(d.weights[0] >= 0.0);
    }

    #[test]
    fn negated_member_still_rank_one() {
        let neg: Vec<f64> = base_values().iter().map(|v| -v).collect();
        let g = group_of(vec![record("P1", base_values()), record("P2", neg)]);
        let d = group_pca_descriptor(&g).unwrap();
        assert!((d.explained_variance - 1.0).abs() < 1e-9);
    }

    #[test]
    fn single_member_group_rejected() {
        let g = group_of(vec![record("P1", base_values())]);
        assert!(group_pca_descriptor(&g).is_err());
    }

    #[test]
    fn zero_variance_member_is_invariant_violation() {
        let g = group_of(vec![record("P1", base_values()), record("P2", vec![1.0; 20])]);
        assert!(matches!(
            group_pca_descriptor(&g),
            Err(Error::InvariantViolation(_))
        ));
    }

    #[test]
    fn jacobi_recovers_known_spectrum() {
        // [[2,1],[1,2]] has eigenvalues 3 and 1.
        let (vals, vecs) = jacobi_eigen(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        assert!((vals[0] - 3.0).abs() < 1e-10);
        assert!((vals[1] - 1.0).abs() < 1e-10);
        let v = &vecs[0];
        assert!((v[0].abs() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
        assert!((v[0] - v[1]).abs() < 1e-10);
    }

    fn noisy_group(seed: u64, members: usize, noise: f64) -> PropertyGroup {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = base_values();
        let records = (0..members)
            .map(|j| {
                let values = base
                    .iter()
                    .map(|b| b + rng.gen_range(-noise..noise))
                    .collect();
                record(&format!("P{}", j), values)
            })
            .collect();
        group_of(records)
    }

    #[test]
    fn member_order_does_not_change_weights() {
        let g = noisy_group(5, 6, 0.4);
        let d1 = group_pca_descriptor(&g).unwrap();
        let mut reversed = g.clone();
        reversed.members.reverse();
        let d2 = group_pca_descriptor(&reversed).unwrap();
        for (a, b) in d1.weights.iter().zip(&d2.weights) {
            assert!((a - b).abs() < 1e-8);
        }
        assert!((d1.explained_variance - d2.explained_variance).abs() < 1e-10);
    }

    proptest! {
        #[test]
        fn first_component_maximizes_projected_variance(seed in 0u64..1000) {
            let g = noisy_group(seed, 5, 1.0);
            let d = group_pca_descriptor(&g).unwrap();
            let pc_var = crate::stats::sample_std(&d.weights).powi(2);

            // Rebuild the standardized columns and compare against random
            // unit directions in member space.
            let columns: Vec<Vec<f64>> = g.members.iter().map(|mbr| {
                let v = mbr.complete_values().unwrap();
                let mu = mean(&v);
                let s = sample_std(&v);
                v.iter().map(|x| (x - mu) / s).collect()
            }).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xABCD);
            for _ in 0..20 {
                let mut u: Vec<f64> = (0..columns.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let norm: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
                for x in &mut u { *x /= norm; }
                let projected: Vec<f64> = (0..20)
                    .map(|row| columns.iter().zip(&u).map(|(c, w)| c[row] * w).sum())
                    .collect();
                let var = crate::stats::sample_std(&projected).powi(2);
                prop_assert!(var <= pc_var + 1e-9);
            }
        }
    }
}
