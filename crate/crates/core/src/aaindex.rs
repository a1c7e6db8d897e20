//! Parser for the AAIndex1 flat-file database of per-amino-acid property indices.
//!
//! Records are delimited by a line containing only `//`. Each record carries an
//! `H` accession line, one or more `D` description lines, and an `I` header
//! followed by two lines of ten values in the fixed order
//! `A/L R/K N/M D/F C/P Q/S E/T G/W H/Y I/V`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The 20 canonical amino acids in alphabetical one-letter order.
/// All per-amino-acid vectors in this crate follow this order.
pub const AMINO_ACIDS: [char; 20] = [
    'A', 'C', 'D', 'E', 'F', 'G', 'H', 'I', 'K', 'L', 'M', 'N', 'P', 'Q', 'R', 'S', 'T', 'V', 'W',
    'Y',
];

/// Index of a canonical one-letter code in [`AMINO_ACIDS`], case-insensitive.
pub fn amino_acid_index(c: char) -> Option<usize> {
    AMINO_ACIDS
        .iter()
        .position(|&a| a == c.to_ascii_uppercase())
}

/// Column order of the two `I`-block value lines in an AAIndex1 file.
const I_LINE_ORDER: [char; 20] = [
    'A', 'R', 'N', 'D', 'C', 'Q', 'E', 'G', 'H', 'I', 'L', 'K', 'M', 'F', 'P', 'S', 'T', 'W', 'Y',
    'V',
];

/// One AAIndex1 entry: an accession, a free-text description, and one value
/// per canonical amino acid. `None` marks an `NA` slot in the source file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyRecord {
    pub accession: String,
    pub description: String,
    /// Values in [`AMINO_ACIDS`] order; `None` where the file said `NA`.
    pub values: Vec<Option<f64>>,
}

impl PropertyRecord {
    pub fn has_missing(&self) -> bool {
        self.values.iter().any(|v| v.is_none())
    }

    /// The 20 values of a complete record, in [`AMINO_ACIDS`] order.
    ///
    /// Errors if any value is missing.
    pub fn complete_values(&self) -> Result<Vec<f64>> {
        self.values
            .iter()
            .map(|v| {
                v.ok_or_else(|| {
                    Error::InvariantViolation(format!(
                        "record {} has missing values",
                        self.accession
                    ))
                })
            })
            .collect()
    }

    pub fn value(&self, amino_acid: char) -> Option<f64> {
        amino_acid_index(amino_acid).and_then(|i| self.values[i])
    }
}

/// Parse AAIndex1 flat-file text into property records. Empty input yields an
/// empty list. Record order is preserved; accessions must be unique.
pub fn parse_aaindex(text: &str) -> Result<Vec<PropertyRecord>> {
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (block_no, block) in split_blocks(text).into_iter().enumerate() {
        let record = parse_block(&block, block_no)?;
        if !seen.insert(record.accession.clone()) {
            return Err(Error::Parse {
                context: record.accession,
                message: "duplicate accession".into(),
            });
        }
        records.push(record);
    }
    Ok(records)
}

/// Keep only records with no `NA` values; order preserved.
pub fn drop_incomplete(records: &[PropertyRecord]) -> Vec<PropertyRecord> {
    records
        .iter()
        .filter(|r| !r.has_missing())
        .cloned()
        .collect()
}

/// Re-serialize records into the AAIndex1 flat format. Used by the round-trip
/// tests and by the demo-data generator; not a byte-exact copy of the source
/// file (R/A/T/J/C annotation lines are not retained).
pub fn write_aaindex(records: &[PropertyRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&format!("H {}\n", r.accession));
        out.push_str(&format!("D {}\n", r.description));
        out.push_str("I    A/L     R/K     N/M     D/F     C/P     Q/S     E/T     G/W     H/Y     I/V\n");
        for half in 0..2 {
            let line: Vec<String> = I_LINE_ORDER[half * 10..half * 10 + 10]
                .iter()
                .map(|&aa| match r.values[amino_acid_index(aa).unwrap()] {
                    Some(v) => format!("{}", v),
                    None => "NA".to_string(),
                })
                .collect();
            out.push_str("     ");
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out.push_str("//\n");
    }
    out
}

fn split_blocks(text: &str) -> Vec<Vec<String>> {
    let mut blocks = Vec::new();
    let mut current: Vec<String> = Vec::new();
    for line in text.lines() {
        if line.trim_end() == "//" {
            if current.iter().any(|l| !l.trim().is_empty()) {
                blocks.push(std::mem::take(&mut current));
            } else {
                current.clear();
            }
        } else {
            current.push(line.to_string());
        }
    }
    if current.iter().any(|l| !l.trim().is_empty()) {
        blocks.push(current);
    }
    blocks
}

fn parse_block(lines: &[String], block_no: usize) -> Result<PropertyRecord> {
    let mut accession: Option<String> = None;
    let mut description_parts: Vec<String> = Vec::new();
    let mut value_tokens: Vec<String> = Vec::new();
    let mut key = ' ';
    let mut in_i_block = false;

    for line in lines {
        if line.is_empty() {
            continue;
        }
        let starts_with_space = line.starts_with(' ') || line.starts_with('\t');
        if !starts_with_space {
            key = line.chars().next().unwrap();
            in_i_block = false;
        }
        let content = if starts_with_space {
            line.trim()
        } else {
            line[1..].trim()
        };
        match key {
            'H' if !starts_with_space => {
                accession = Some(content.to_string());
            }
            'D' => {
                if !content.is_empty() {
                    description_parts.push(content.to_string());
                }
            }
            'I' => {
                if !starts_with_space {
                    // Header line naming the column order; values follow.
                    in_i_block = true;
                } else if in_i_block {
                    value_tokens.extend(content.split_whitespace().map(|s| s.to_string()));
                }
            }
            _ => {}
        }
    }

    let context = accession
        .clone()
        .unwrap_or_else(|| format!("block #{}", block_no));
    let accession = accession.filter(|a| !a.is_empty()).ok_or_else(|| Error::Parse {
        context: context.clone(),
        message: "missing H (accession) line".into(),
    })?;
    if value_tokens.is_empty() {
        return Err(Error::Parse {
            context,
            message: "missing I (index data) block".into(),
        });
    }
    if value_tokens.len() != 20 {
        return Err(Error::Parse {
            context,
            message: format!("expected 20 values in I block, found {}", value_tokens.len()),
        });
    }

    let mut values = vec![None; 20];
    for (slot, token) in I_LINE_ORDER.iter().zip(&value_tokens) {
        let idx = amino_acid_index(*slot).unwrap();
        if token == "NA" {
            values[idx] = None;
        } else {
            let v: f64 = token.parse().map_err(|_| Error::Parse {
                context: accession.clone(),
                message: format!("bad numeric value '{}'", token),
            })?;
            values[idx] = Some(v);
        }
    }

    Ok(PropertyRecord {
        accession,
        description: description_parts.join(" "),
        values,
    })
}
