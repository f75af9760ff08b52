use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use super::SegmentRecord;
use crate::error::{Error, Result};

/// A CTC output vocabulary: token → id plus cleanup metadata.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VocabSpec {
    pub tokens: BTreeMap<String, u32>,
    pub blank: String,
    /// Tokens to delete when they do not occur in the corpus.
    #[serde(default)]
    pub removed: BTreeSet<String>,
    /// Tokens to insert, appended after existing ids.
    #[serde(default)]
    pub added: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanedVocab {
    pub vocab: VocabSpec,
    /// Old id → new id for every surviving token.
    pub id_map: BTreeMap<u32, u32>,
}

impl VocabSpec {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let vocab: VocabSpec = serde_json::from_str(&text)?;
        vocab.validate()?;
        Ok(vocab)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.tokens.contains_key(&self.blank) {
            return Err(Error::InvalidVocab(format!(
                "blank `{}` missing",
                self.blank
            )));
        }
        if self.removed.contains(&self.blank) {
            return Err(Error::InvalidVocab("blank cannot be removed".into()));
        }
        if self.tokens.keys().any(|t| t.is_empty()) || self.added.iter().any(|t| t.is_empty()) {
            return Err(Error::InvalidVocab("empty token".into()));
        }
        if let Some(t) = self.added.iter().find(|t| self.removed.contains(*t)) {
            return Err(Error::InvalidVocab(format!(
                "`{t}` is both added and removed"
            )));
        }
        let ids: BTreeSet<u32> = self.tokens.values().copied().collect();
        if ids.len() != self.tokens.len() {
            return Err(Error::InvalidVocab("duplicate token id".into()));
        }
        Ok(())
    }

    /// Tokens in id order.
    pub fn ordered(&self) -> Vec<(&str, u32)> {
        let mut v: Vec<(&str, u32)> = self.tokens.iter().map(|(t, &i)| (t.as_str(), i)).collect();
        v.sort_by_key(|&(_, i)| i);
        v
    }
}

/// Drop unused `removed` tokens, insert `added` ones and renumber densely in
/// the old id order. Fails with [`Error::RemoveInUse`] when a token marked
/// for removal still occurs in a transcription.
pub fn clean_vocab<'a>(
    vocab: &VocabSpec,
    corpus: impl IntoIterator<Item = &'a SegmentRecord>,
) -> Result<CleanedVocab> {
    vocab.validate()?;
    let mut in_use: BTreeSet<&str> = BTreeSet::new();
    let texts: Vec<(String, String)> = corpus
        .into_iter()
        .map(|r| {
            (
                r.transcription.nfc().collect(),
                r.transcription.nfd().collect(),
            )
        })
        .collect();
    for token in &vocab.removed {
        if texts
            .iter()
            .any(|(nfc, nfd)| nfc.contains(token.as_str()) || nfd.contains(token.as_str()))
        {
            in_use.insert(token);
        }
    }
    if let Some(t) = in_use.into_iter().next() {
        return Err(Error::RemoveInUse(t.to_string()));
    }

    let mut tokens = BTreeMap::new();
    let mut id_map = BTreeMap::new();
    let mut next = 0u32;
    for (token, old) in vocab.ordered() {
        if vocab.removed.contains(token) {
            continue;
        }
        tokens.insert(token.to_string(), next);
        id_map.insert(old, next);
        next += 1;
    }
    for token in &vocab.added {
        if !tokens.contains_key(token) {
            tokens.insert(token.clone(), next);
            next += 1;
        }
    }
    Ok(CleanedVocab {
        vocab: VocabSpec {
            tokens,
            blank: vocab.blank.clone(),
            removed: vocab.removed.clone(),
            added: vocab.added.clone(),
        },
        id_map,
    })
}
