//! Manifest-level corpus preparation: vote filtering, seeded sampling and
//! splitting, remapping of invalid G2P output, vocabulary cleanup and
//! absolute-onset test-set construction.
//!
//! All randomness goes through [`crate::rng`], so every selection is a pure
//! function of (input, parameters, seed). Sampled manifests are ordered by
//! `utt_id`.

mod onset;
mod remap;
mod sampling;
mod vocab;

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use onset::{build_onset_testset, onset_phoneme, ONSET_PHONEMES};
pub use remap::{remap_invalid, RemapAction, RemapConfig, RemapEvent};
pub use sampling::{sample_per_language, sample_segments, split_validation};
pub use vocab::{clean_vocab, CleanedVocab, VocabSpec};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitTag {
    Train,
    Valid,
    Test,
}

/// One speech segment in a manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentRecord {
    pub utt_id: String,
    pub language: String,
    /// Orthographic prompt.
    pub sentence: String,
    /// IPA transcription (G2P or model output).
    pub transcription: String,
    #[serde(default)]
    pub upvotes: u32,
    #[serde(default)]
    pub downvotes: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_tag: Option<SplitTag>,
    /// Annotator judgment that the onset is valid and acoustically analyzable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analyzable: Option<bool>,
    /// Target phoneme label assigned by the onset test-set builder.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phoneme: Option<String>,
    /// Free-form origin tag, e.g. the corpus release split a segment came from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl SegmentRecord {
    pub fn new(utt_id: &str, language: &str, sentence: &str, transcription: &str) -> Self {
        SegmentRecord {
            utt_id: utt_id.into(),
            language: language.into(),
            sentence: sentence.into(),
            transcription: transcription.into(),
            upvotes: 0,
            downvotes: 0,
            split_tag: None,
            analyzable: None,
            phoneme: None,
            provenance: None,
        }
    }
}

/// Fail on repeated `utt_id`s.
pub fn check_unique(manifest: &[SegmentRecord]) -> Result<()> {
    let mut seen = HashSet::with_capacity(manifest.len());
    for rec in manifest {
        if !seen.insert(rec.utt_id.as_str()) {
            return Err(Error::DuplicateUtterance(rec.utt_id.clone()));
        }
    }
    Ok(())
}

pub fn read_manifest(path: impl AsRef<Path>) -> Result<Vec<SegmentRecord>> {
    let manifest = crate::jsonl::read_all(path)?;
    check_unique(&manifest)?;
    Ok(manifest)
}

pub fn write_manifest(path: impl AsRef<Path>, manifest: &[SegmentRecord]) -> Result<()> {
    crate::jsonl::write_all(path, manifest)
}

/// Keep records with at most `max_downvotes` downvotes (0 drops every
/// downvoted segment).
pub fn filter_downvoted(
    manifest: impl IntoIterator<Item = SegmentRecord>,
    max_downvotes: u32,
) -> Vec<SegmentRecord> {
    manifest
        .into_iter()
        .filter(|r| r.downvotes <= max_downvotes)
        .collect()
}

pub(crate) fn sort_by_id(manifest: &mut [SegmentRecord]) {
    manifest.sort_by(|a, b| a.utt_id.cmp(&b.utt_id));
}
