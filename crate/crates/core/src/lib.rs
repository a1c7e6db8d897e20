//! Frequency-domain encoding of amino-acid sequences from physicochemical
//! property descriptors, plus training, selection, and assembly of
//! supervised model ensembles for protein and peptide property prediction.

pub mod aaindex;
pub mod dataset;
pub mod encoding;
pub mod ensemble;
pub mod error;
pub mod evaluation;
pub mod fft;
pub mod models;
pub mod propgroups;
pub mod stats;
pub mod synth;

pub use error::{Error, Result};
