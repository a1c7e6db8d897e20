//! Grouping of AAIndex properties into eight keyword groups and compression
//! of each group into a single per-amino-acid descriptor.

mod kmeans;
mod ks;
mod pca;

pub use kmeans::{calinski_harabasz, kmeans_cluster, ClusterPartition};
pub use ks::{ks_normality_filter, ks_statistic_vs_normal};
pub use pca::group_pca_descriptor;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::aaindex::{amino_acid_index, PropertyRecord, AMINO_ACIDS};
use crate::error::{Error, Result};

/// Current version of the descriptor-table JSON schema.
pub const DESCRIPTOR_SCHEMA_VERSION: u32 = 1;

/// The eight semantic property keywords, in group-id order (ID-01..ID-08).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Keyword {
    AlphaStructure,
    BetaStructure,
    Energy,
    Hydropathy,
    Hydrophobicity,
    OtherIndexes,
    SecondaryStructure,
    Volume,
}

impl Keyword {
    pub const ALL: [Keyword; 8] = [
        Keyword::AlphaStructure,
        Keyword::BetaStructure,
        Keyword::Energy,
        Keyword::Hydropathy,
        Keyword::Hydrophobicity,
        Keyword::OtherIndexes,
        Keyword::SecondaryStructure,
        Keyword::Volume,
    ];

    /// Group id `ID-01`..`ID-08` for this keyword.
    pub fn group_id(self) -> String {
        let pos = Keyword::ALL.iter().position(|&k| k == self).unwrap();
        format!("ID-{:02}", pos + 1)
    }
}

/// A set of property records sharing one semantic keyword.
#[derive(Debug, Clone)]
pub struct PropertyGroup {
    pub group_id: String,
    pub keyword: Keyword,
    pub members: Vec<PropertyRecord>,
}

/// A 20-entry residue-to-scalar map: the first principal component of one
/// property group, plus the fraction of variance it explains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AminoAcidDescriptor {
    pub group_id: String,
    /// Weights in [`AMINO_ACIDS`] order.
    pub weights: Vec<f64>,
    pub explained_variance: f64,
}

impl AminoAcidDescriptor {
    pub fn weight(&self, amino_acid: char) -> Option<f64> {
        amino_acid_index(amino_acid).map(|i| self.weights[i])
    }

    pub fn mean_weight(&self) -> f64 {
        self.weights.iter().sum::<f64>() / 20.0
    }
}

/// Keyword lexicon: for each keyword (in priority order), the description
/// substrings that assign a property to it. Matching is case-insensitive.
pub type Lexicon = Vec<(Keyword, Vec<String>)>;

/// The shipped lexicon. First match in this order wins; unmatched
/// descriptions fall through to `other_indexes`.
pub fn default_lexicon() -> Lexicon {
    let entry = |k: Keyword, words: &[&str]| (k, words.iter().map(|s| s.to_string()).collect());
    vec![
        entry(Keyword::AlphaStructure, &["alpha", "helix"]),
        entry(Keyword::BetaStructure, &["beta", "sheet", "strand"]),
        entry(
            Keyword::Energy,
            &["energy", "free energy", "thermodynamic", "entropy", "enthalpy"],
        ),
        entry(Keyword::Hydropathy, &["hydropathy"]),
        entry(Keyword::Hydrophobicity, &["hydrophob"]),
        entry(
            Keyword::SecondaryStructure,
            &["coil", "turn", "secondary structure", "conformation"],
        ),
        entry(Keyword::Volume, &["volume", "size", "bulk"]),
    ]
}

/// Assign each record to the first keyword whose lexicon matches its
/// description; unmatched records go to `other_indexes`. Returns exactly
/// eight groups in ID-01..ID-08 order (some possibly empty).
pub fn assign_keyword_groups(records: &[PropertyRecord], lexicon: &Lexicon) -> Vec<PropertyGroup> {
    let mut groups: Vec<PropertyGroup> = Keyword::ALL
        .iter()
        .map(|&keyword| PropertyGroup {
            group_id: keyword.group_id(),
            keyword,
            members: Vec::new(),
        })
        .collect();

    for record in records {
        let description = record.description.to_lowercase();
        let keyword = lexicon
            .iter()
            .find(|(_, substrings)| substrings.iter().any(|s| description.contains(s.as_str())))
            .map(|(k, _)| *k)
            .unwrap_or(Keyword::OtherIndexes);
        let slot = Keyword::ALL.iter().position(|&k| k == keyword).unwrap();
        groups[slot].members.push(record.clone());
    }
    groups
}

/// Versioned on-disk form of a descriptor set; the contract between
/// descriptor generation and sequence encoding.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DescriptorTable {
    pub schema_version: u32,
    pub groups: Vec<DescriptorEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DescriptorEntry {
    pub group_id: String,
    pub keyword: Keyword,
    pub member_accessions: Vec<String>,
    pub explained_variance: f64,
    /// Weights keyed by one-letter residue code.
    pub weights: BTreeMap<String, f64>,
}

impl DescriptorTable {
    pub fn from_groups(pairs: &[(PropertyGroup, AminoAcidDescriptor)]) -> Self {
        let groups = pairs
            .iter()
            .map(|(group, descriptor)| DescriptorEntry {
                group_id: group.group_id.clone(),
                keyword: group.keyword,
                member_accessions: group.members.iter().map(|m| m.accession.clone()).collect(),
                explained_variance: descriptor.explained_variance,
                weights: AMINO_ACIDS
                    .iter()
                    .zip(&descriptor.weights)
                    .map(|(aa, w)| (aa.to_string(), *w))
                    .collect(),
            })
            .collect();
        DescriptorTable {
            schema_version: DESCRIPTOR_SCHEMA_VERSION,
            groups,
        }
    }

    pub fn descriptors(&self) -> Result<Vec<AminoAcidDescriptor>> {
        if self.schema_version != DESCRIPTOR_SCHEMA_VERSION {
            return Err(Error::SchemaVersionMismatch {
                found: self.schema_version,
                expected: DESCRIPTOR_SCHEMA_VERSION,
            });
        }
        self.groups
            .iter()
            .map(|entry| {
                let mut weights = vec![0.0; 20];
                for (key, value) in &entry.weights {
                    let c = key.chars().next().ok_or_else(|| {
                        Error::InvalidArgument("empty weight key".into())
                    })?;
                    let idx = amino_acid_index(c).ok_or_else(|| {
                        Error::InvalidArgument(format!("unknown residue key '{}'", key))
                    })?;
                    weights[idx] = *value;
                }
                if entry.weights.len() != 20 {
                    return Err(Error::InvalidArgument(format!(
                        "descriptor {} has {} weights, expected 20",
                        entry.group_id,
                        entry.weights.len()
                    )));
                }
                Ok(AminoAcidDescriptor {
                    group_id: entry.group_id.clone(),
                    weights,
                    explained_variance: entry.explained_variance,
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(accession: &str, description: &str) -> PropertyRecord {
        PropertyRecord {
            accession: accession.into(),
            description: description.into(),
            values: (0..20).map(|i| Some(i as f64)).collect(),
        }
    }

    #[test]
    fn direct_keyword_hits() {
        let records = vec![
            record("A1", "Normalized frequency of alpha-helix"),
            record("A2", "Average volumes of residues"),
            record("A3", "Optical rotation measurement"),
        ];
        let groups = assign_keyword_groups(&records, &default_lexicon());
        assert_eq!(groups.len(), 8);
        assert_eq!(groups[0].keyword, Keyword::AlphaStructure);
        assert_eq!(groups[0].members.len(), 1);
        assert_eq!(groups[0].members[0].accession, "A1");
        let volume = groups.iter().find(|g| g.keyword == Keyword::Volume).unwrap();
        assert_eq!(volume.members[0].accession, "A2");
        let other = groups
            .iter()
            .find(|g| g.keyword == Keyword::OtherIndexes)
            .unwrap();
        assert_eq!(other.members[0].accession, "A3");
    }

    #[test]
    fn priority_resolves_multi_match() {
        // "alpha" outranks "conformation".
        let records = vec![record("M1", "Conformational preference for alpha helix")];
        let groups = assign_keyword_groups(&records, &default_lexicon());
        assert_eq!(groups[0].members.len(), 1);
    }

    #[test]
    fn partition_covers_all_records_once() {
        let records: Vec<PropertyRecord> = (0..30)
            .map(|i| record(&format!("R{}", i), if i % 2 == 0 { "beta-sheet propensity" } else { "Heat capacity" }))
            .collect();
        let groups = assign_keyword_groups(&records, &default_lexicon());
        let total: usize = groups.iter().map(|g| g.members.len()).sum();
        assert_eq!(total, records.len());
    }

    #[test]
    fn group_ids_follow_table_order() {
        assert_eq!(Keyword::AlphaStructure.group_id(), "ID-01");
        assert_eq!(Keyword::OtherIndexes.group_id(), "ID-06");
        assert_eq!(Keyword::Volume.group_id(), "ID-08");
    }

    #[test]
    fn descriptor_table_round_trip() {
        let group = PropertyGroup {
            group_id: "ID-01".into(),
            keyword: Keyword::AlphaStructure,
            members: vec![record("A1", "alpha one"), record("A2", "alpha two")],
        };
        let descriptor = AminoAcidDescriptor {
            group_id: "ID-01".into(),
            weights: (0..20).map(|i| i as f64 * 0.1).collect(),
            explained_variance: 0.93,
        };
        let table = DescriptorTable::from_groups(&[(group, descriptor.clone())]);
        let json = serde_json::to_string(&table).unwrap();
        let parsed: DescriptorTable = serde_json::from_str(&json).unwrap();
        let descriptors = parsed.descriptors().unwrap();
        assert_eq!(descriptors, vec![descriptor]);
    }

    #[test]
    fn schema_version_mismatch_rejected() {
        let table = DescriptorTable {
            schema_version: 99,
            groups: vec![],
        };
        assert!(matches!(
            table.descriptors(),
            Err(Error::SchemaVersionMismatch { found: 99, .. })
        ));
    }
}
