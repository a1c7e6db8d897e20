//! Sequence encoding: residue-to-descriptor lookup, zero-padding, and the
//! FFT magnitude half-spectrum used as the model feature vector.

use serde::{Deserialize, Serialize};

use crate::aaindex::amino_acid_index;
use crate::error::{Error, Result};
use crate::fft;
use crate::propgroups::AminoAcidDescriptor;

/// What to do with non-canonical residues (X, B, Z, U, gaps, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ResiduePolicy {
    /// Reject the sequence, naming the offending position.
    #[default]
    Error,
    /// Drop the residue from the signal.
    Skip,
    /// Substitute the mean of the 20 descriptor weights.
    Mean,
}

impl std::str::FromStr for ResiduePolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "error" => Ok(ResiduePolicy::Error),
            "skip" => Ok(ResiduePolicy::Skip),
            "mean" => Ok(ResiduePolicy::Mean),
            other => Err(Error::InvalidArgument(format!(
                "unknown residue policy '{}' (expected error|skip|mean)",
                other
            ))),
        }
    }
}

/// A sequence turned into one numeric sample per residue under one group's
/// descriptor.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedSignal {
    pub group_id: String,
    pub samples: Vec<f64>,
    pub original_length: usize,
}

/// FFT magnitude half-spectrum of a padded encoded signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFeatures {
    pub group_id: String,
    /// `|X_k|` for `k = 0..=P/2`, length `P/2 + 1`.
    pub magnitudes: Vec<f64>,
    pub padded_length: usize,
}

/// Map each residue of `seq` to its descriptor weight. Case-insensitive.
pub fn encode_sequence(
    seq: &str,
    descriptor: &AminoAcidDescriptor,
    policy: ResiduePolicy,
) -> Result<EncodedSignal> {
    if seq.is_empty() {
        return Err(Error::InvalidArgument("empty sequence".into()));
    }
    let mut samples = Vec::with_capacity(seq.len());
    for (position, c) in seq.chars().enumerate() {
        match amino_acid_index(c) {
            Some(i) => samples.push(descriptor.weights[i]),
            None => match policy {
                ResiduePolicy::Error => {
                    return Err(Error::UnsupportedResidue {
                        residue: c,
                        position: position + 1,
                    })
                }
                ResiduePolicy::Skip => {}
                ResiduePolicy::Mean => samples.push(descriptor.mean_weight()),
            },
        }
    }
    if samples.is_empty() {
        return Err(Error::InvalidArgument(
            "sequence has no encodable residues".into(),
        ));
    }
    Ok(EncodedSignal {
        group_id: descriptor.group_id.clone(),
        original_length: samples.len(),
        samples,
    })
}

/// Append zeros to reach `target`, which must be a power of two not smaller
/// than the signal.
pub fn zero_pad(signal: &EncodedSignal, target: usize) -> Result<EncodedSignal> {
    if target < signal.samples.len() {
        return Err(Error::InvalidArgument(format!(
            "pad target {} is smaller than signal length {}",
            target,
            signal.samples.len()
        )));
    }
    if !target.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "pad target {} is not a power of two",
            target
        )));
    }
    let mut samples = signal.samples.clone();
    samples.resize(target, 0.0);
    Ok(EncodedSignal {
        group_id: signal.group_id.clone(),
        samples,
        original_length: signal.original_length,
    })
}

pub use crate::fft::fft_magnitude;

/// encode -> pad -> FFT for every group descriptor, keeping groups separate.
pub fn spectral_encode(
    seq: &str,
    descriptors: &[AminoAcidDescriptor],
    padded_length: usize,
    policy: ResiduePolicy,
) -> Result<Vec<SpectralFeatures>> {
    descriptors
        .iter()
        .map(|descriptor| {
            let encoded = encode_sequence(seq, descriptor, policy)?;
            if encoded.samples.len() > padded_length {
                return Err(Error::InvalidArgument(format!(
                    "sequence length {} exceeds the padded length {} this model was built for",
                    encoded.original_length, padded_length
                )));
            }
            let padded = zero_pad(&encoded, padded_length)?;
            Ok(SpectralFeatures {
                group_id: descriptor.group_id.clone(),
                magnitudes: fft::fft_magnitude(&padded.samples)?,
                padded_length,
            })
        })
        .collect()
}

/// Concatenated per-group spectra as one flat feature row.
pub fn feature_row(spectra: &[SpectralFeatures]) -> Vec<f64> {
    spectra.iter().flat_map(|s| s.magnitudes.clone()).collect()
}
