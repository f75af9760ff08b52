use std::collections::BTreeMap;

use super::{sort_by_id, SegmentRecord};
use crate::error::{Error, Result};
use crate::rng;

/// Target phonemes for absolute-onset evaluation, in bucket order.
pub const ONSET_PHONEMES: [&str; 6] = ["b", "d", "g", "p", "t", "k"];

/// The plosive phoneme a sentence starts with, judged from the first
/// alphabetic character of the lower-cased text (leading quotes and
/// punctuation are skipped).
pub fn onset_phoneme(sentence: &str) -> Option<&'static str> {
    let first = sentence.chars().find(|c| c.is_alphabetic())?;
    let mut lower = first.to_lowercase();
    let c = lower.next()?;
    if lower.next().is_some() {
        return None;
    }
    ONSET_PHONEMES.iter().copied().find(|p| p.starts_with(c))
}

/// Select `per_phoneme_n` analyzable records per onset phoneme.
///
/// Only records with `analyzable == Some(true)` are eligible. Each bucket is
/// sorted by `utt_id` and sampled with its own stream of `seed`; the result
/// carries the phoneme label and is ordered by `utt_id`.
pub fn build_onset_testset(
    manifest: &[SegmentRecord],
    per_phoneme_n: usize,
    seed: u64,
) -> Result<Vec<SegmentRecord>> {
    let mut buckets: BTreeMap<&str, Vec<SegmentRecord>> =
        ONSET_PHONEMES.iter().map(|p| (*p, Vec::new())).collect();
    for rec in manifest {
        if rec.analyzable != Some(true) {
            continue;
        }
        if let Some(p) = onset_phoneme(&rec.sentence) {
            let mut rec = rec.clone();
            rec.phoneme = Some(p.to_string());
            buckets.get_mut(p).expect("bucket").push(rec);
        }
    }
    let mut out = Vec::with_capacity(per_phoneme_n * ONSET_PHONEMES.len());
    for (stream, phoneme) in ONSET_PHONEMES.iter().enumerate() {
        let bucket = buckets.get_mut(phoneme).expect("bucket");
        if bucket.len() < per_phoneme_n {
            return Err(Error::InsufficientInstances {
                phoneme: phoneme.to_string(),
                have: bucket.len(),
                need: per_phoneme_n,
            });
        }
        sort_by_id(bucket);
        let mut r = rng::seeded_stream(seed, stream as u64);
        for i in rng::sample_indices(&mut r, bucket.len(), per_phoneme_n) {
            out.push(bucket[i].clone());
        }
    }
    sort_by_id(&mut out);
    Ok(out)
}
