//! Phonation transfer from helper-model plosives onto reference transcriptions.
//!
//! A reference plosive at index `i` is matched to a helper plosive at
//! `j = i + offset` when the offset is in the table's window, the mapping
//! table admits the two base symbols and the frame spans are close. The
//! matched reference phone keeps its place and manner and takes the helper
//! phone's phonation; everything else passes through unchanged.

mod batch;
mod mapping;
mod matcher;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub(crate) use batch::thread_pool;
pub use batch::{augment_corpus, prefilter_by_aspiration, CorpusOptions, MissingPolicy};
pub use mapping::{MappingEntry, MappingTable, MAX_WINDOW_OFFSET};
pub use matcher::{is_candidate, match_phones, MatchPair, ProximityRule, StartSlack};

use crate::error::Result;
use crate::ipa::{Inventory, IpaError, Phonation};
use crate::track::PhoneTrack;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentOptions {
    /// Transfer breathy voice. When off, a breathy helper phone transfers as
    /// plain voiced.
    pub breathy: bool,
}

impl Default for AugmentOptions {
    fn default() -> Self {
        AugmentOptions { breathy: true }
    }
}

/// Result of rewriting one track.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedTrack {
    pub track: PhoneTrack,
    /// Reference indices that were rewritten, in match order.
    pub applied: Vec<usize>,
    /// Reference indices whose base had no voicing counterpart.
    pub skipped: Vec<usize>,
}

/// Copy `rm` and overwrite the phonation of every matched phone with that of
/// its helper phone. Timestamps are untouched; phones whose base has no
/// voicing counterpart are left as they are and reported in `skipped`.
pub fn augment_track(
    rm: &PhoneTrack,
    matches: &[MatchPair],
    inventory: &Inventory,
    opts: &AugmentOptions,
) -> Result<AugmentedTrack> {
    let mut track = rm.clone();
    let mut applied = Vec::new();
    let mut skipped = Vec::new();
    for m in matches {
        let mut target = m.hm_phone.phone.phonation();
        if !opts.breathy && target == Phonation::BreathyVoiced {
            target = Phonation::Voiced;
        }
        let slot = &mut track.phones[m.rm_index];
        match inventory.with_phonation(&slot.phone, target) {
            Ok(phone) => {
                slot.phone = phone;
                applied.push(m.rm_index);
            }
            Err(IpaError::NoVoicingCounterpart(_)) => skipped.push(m.rm_index),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(AugmentedTrack {
        track,
        applied,
        skipped,
    })
}

/// Corpus-level counters. Merging is associative and commutative.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentationStats {
    /// Produced phone string → number of times it was written by a match.
    pub counts: BTreeMap<String, u64>,
    pub matched: u64,
    /// Reference plosives left unchanged (no match, or no counterpart).
    pub unmatched_rm_plosives: u64,
    pub utterances: u64,
    /// Utterances with no helper track (skip policy only), sorted.
    pub missing_counterparts: Vec<String>,
}

impl AugmentationStats {
    pub fn record(&mut self, out: &AugmentedTrack) {
        self.utterances += 1;
        for &i in &out.applied {
            *self
                .counts
                .entry(out.track.phones[i].phone.to_string())
                .or_insert(0) += 1;
        }
        self.matched += out.applied.len() as u64;
        let plosives = out
            .track
            .phones
            .iter()
            .filter(|tp| tp.phone.is_plosive())
            .count() as u64;
        self.unmatched_rm_plosives += plosives - out.applied.len() as u64;
    }

    pub fn record_missing(&mut self, rm: &PhoneTrack) {
        self.utterances += 1;
        self.unmatched_rm_plosives +=
            rm.phones.iter().filter(|tp| tp.phone.is_plosive()).count() as u64;
        self.missing_counterparts.push(rm.utt_id.clone());
    }

    pub fn merge(&mut self, other: AugmentationStats) {
        for (sym, n) in other.counts {
            *self.counts.entry(sym).or_insert(0) += n;
        }
        self.matched += other.matched;
        self.unmatched_rm_plosives += other.unmatched_rm_plosives;
        self.utterances += other.utterances;
        self.missing_counterparts.extend(other.missing_counterparts);
        self.missing_counterparts.sort_unstable();
    }

    /// Counts by descending frequency, then symbol.
    pub fn ranked_counts(&self) -> Vec<(&str, u64)> {
        let mut v: Vec<(&str, u64)> = self.counts.iter().map(|(k, n)| (k.as_str(), *n)).collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(b.0)));
        v
    }

    /// Plain-text summary, one produced symbol per line.
    pub fn summary(&self) -> String {
        let mut s = format!(
            "utterances: {}\nmatched: {}\nunmatched reference plosives: {}\n",
            self.utterances, self.matched, self.unmatched_rm_plosives
        );
        if !self.missing_counterparts.is_empty() {
            s.push_str(&format!(
                "missing helper tracks: {}\n",
                self.missing_counterparts.len()
            ));
        }
        for (sym, n) in self.ranked_counts() {
            s.push_str(&format!("  {sym}\t{n}\n"));
        }
        s
    }
}

/// Match and rewrite one utterance.
pub fn augment_utterance(
    rm: &PhoneTrack,
    hm: &PhoneTrack,
    table: &MappingTable,
    proximity: &ProximityRule,
    inventory: &Inventory,
    opts: &AugmentOptions,
) -> Result<AugmentedTrack> {
    let matches = match_phones(rm, hm, table, proximity)?;
    augment_track(rm, &matches, inventory, opts)
}
