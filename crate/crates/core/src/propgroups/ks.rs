//! One-sample Kolmogorov–Smirnov normality filter over property records.

use crate::aaindex::PropertyRecord;
use crate::error::{Error, Result};
use crate::stats::{mean, normal_cdf, sample_std};

/// Asymptotic KS critical coefficient for the supported significance levels.
fn critical_coefficient(alpha: f64) -> Result<f64> {
    // c(alpha) such that the critical value is c / sqrt(n).
    if (alpha - 0.01).abs() < 1e-12 {
        Ok(1.628)
    } else if (alpha - 0.05).abs() < 1e-12 {
        Ok(1.358)
    } else if (alpha - 0.10).abs() < 1e-12 {
        Ok(1.224)
    } else {
        Err(Error::InvalidArgument(format!(
            "alpha must be one of 0.01, 0.05, 0.10; got {}",
            alpha
        )))
    }
}

/// KS statistic D = sup |F_empirical - Phi| of the standardized values
/// against the standard normal CDF. Returns `None` for zero-variance input.
pub fn ks_statistic_vs_normal(values: &[f64]) -> Option<f64> {
    let m = mean(values);
    let s = sample_std(values);
    if s == 0.0 || !s.is_finite() {
        return None;
    }
    let mut z: Vec<f64> = values.iter().map(|v| (v - m) / s).collect();
    z.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = z.len() as f64;
    let mut d: f64 = 0.0;
    for (i, zi) in z.iter().enumerate() {
        let cdf = normal_cdf(*zi);
        let upper = (i as f64 + 1.0) / n - cdf;
        let lower = cdf - i as f64 / n;
        d = d.max(upper.abs()).max(lower.abs());
    }
    Some(d)
}

/// Keep records whose 20 standardized values pass the KS normality test at
/// the given level; constant-valued records are removed.
pub fn ks_normality_filter(
    records: &[PropertyRecord],
    alpha: f64,
) -> Result<Vec<PropertyRecord>> {
    let c = critical_coefficient(alpha)?;
    let mut kept = Vec::new();
    for record in records {
        let values = record.complete_values()?;
        if values.len() != 20 {
            return Err(Error::InvariantViolation(format!(
                "record {} has {} values, expected 20",
                record.accession,
                values.len()
            )));
        }
        let threshold = c / (values.len() as f64).sqrt();
        match ks_statistic_vs_normal(&values) {
            Some(d) if d < threshold => kept.push(record.clone()),
            _ => {}
        }
    }
    Ok(kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ContinuousCDF, Normal};

    fn record_with(values: Vec<f64>) -> PropertyRecord {
        PropertyRecord {
            accession: "KS0001".into(),
            description: "test".into(),
            values: values.into_iter().map(Some).collect(),
        }
    }

    /// 20 equally spaced normal quantiles, the best-case normal sample.
    fn normal_quantiles() -> Vec<f64> {
        let n = Normal::new(0.0, 1.0).unwrap();
        (0..20)
            .map(|i| n.inverse_cdf((i as f64 + 0.5) / 20.0))
            .collect()
    }

    #[test]
    fn exact_quantiles_kept_at_any_level() {
        let rec = record_with(normal_quantiles());
        // D for exact quantiles is 0.025 plus the small standardization
        // shift, far below the 0.05-level threshold 1.358/sqrt(20) = 0.304.
        let d = ks_statistic_vs_normal(&rec.complete_values().unwrap()).unwrap();
        assert!(d < 0.1, "D = {}", d);
        for alpha in [0.01, 0.05, 0.10] {
            assert_eq!(ks_normality_filter(&[rec.clone()], alpha).unwrap().len(), 1);
        }
    }

    #[test]
    fn constant_record_removed() {
        let rec = record_with(vec![3.0; 20]);
        assert!(ks_normality_filter(&[rec], 0.05).unwrap().is_empty());
    }

    #[test]
    fn extreme_outlier_removed() {
        // 19 zeros and one 100: the empirical CDF jumps to 0.95 at the
        // standardized zero cluster while Phi sits near 0.58, so D > 0.304.
        // Cross-checked against scipy.stats.kstest on the standardized values.
        let mut values = vec![0.0; 20];
        values[19] = 100.0;
        let d = ks_statistic_vs_normal(&values).unwrap();
        assert!(d > 0.304, "D = {}", d);
        assert!(ks_normality_filter(&[record_with(values)], 0.05)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn invalid_alpha_rejected() {
        let rec = record_with(normal_quantiles());
        assert!(ks_normality_filter(&[rec], 0.07).is_err());
    }

    #[test]
    fn filter_is_idempotent() {
        let records: Vec<PropertyRecord> = (0..10)
            .map(|i| {
                let mut v = normal_quantiles();
                for (j, x) in v.iter_mut().enumerate() {
                    *x += ((i * 7 + j) % 5) as f64 * 0.01;
                }
                let mut r = record_with(v);
                r.accession = format!("KS{:04}", i);
                r
            })
            .collect();
        let once = ks_normality_filter(&records, 0.05).unwrap();
        let twice = ks_normality_filter(&once, 0.05).unwrap();
        assert_eq!(once, twice);
    }
}
