use std::collections::BTreeMap;

use super::{sort_by_id, SegmentRecord, SplitTag};
use crate::error::{Error, Result};
use crate::rng;

/// Draw `n` records uniformly without replacement; output ordered by `utt_id`.
pub fn sample_segments(
    manifest: &[SegmentRecord],
    n: usize,
    seed: u64,
) -> Result<Vec<SegmentRecord>> {
    if manifest.len() < n {
        return Err(Error::InsufficientSegments {
            have: manifest.len(),
            need: n,
        });
    }
    // sort first so the draw does not depend on input order
    let mut pool = manifest.to_vec();
    sort_by_id(&mut pool);
    let mut r = rng::seeded(seed);
    let mut out: Vec<SegmentRecord> = rng::sample_indices(&mut r, pool.len(), n)
        .into_iter()
        .map(|i| pool[i].clone())
        .collect();
    sort_by_id(&mut out);
    Ok(out)
}

/// Draw `n` records from every language present, each with the same seed.
pub fn sample_per_language(
    manifest: &[SegmentRecord],
    n: usize,
    seed: u64,
) -> Result<Vec<SegmentRecord>> {
    let mut by_lang: BTreeMap<&str, Vec<SegmentRecord>> = BTreeMap::new();
    for rec in manifest {
        by_lang.entry(&rec.language).or_default().push(rec.clone());
    }
    let mut out = Vec::with_capacity(n * by_lang.len());
    for records in by_lang.values() {
        out.extend(sample_segments(records, n, seed)?);
    }
    sort_by_id(&mut out);
    Ok(out)
}

/// Split off `round(fraction · len)` records as validation data.
///
/// Returns `(train, valid)`, both ordered by `utt_id`, with tags set.
pub fn split_validation(
    manifest: &[SegmentRecord],
    fraction: f64,
    seed: u64,
) -> Result<(Vec<SegmentRecord>, Vec<SegmentRecord>)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "validation fraction must be in (0, 1), got {fraction}"
        )));
    }
    let n_valid = (fraction * manifest.len() as f64).round() as usize;
    let mut pool = manifest.to_vec();
    sort_by_id(&mut pool);
    let mut r = rng::seeded(seed);
    let mut is_valid = vec![false; pool.len()];
    for i in rng::sample_indices(&mut r, pool.len(), n_valid) {
        is_valid[i] = true;
    }
    let (mut train, mut valid) = (Vec::new(), Vec::new());
    for (mut rec, v) in pool.into_iter().zip(is_valid) {
        if v {
            rec.split_tag = Some(SplitTag::Valid);
            valid.push(rec);
        } else {
            rec.split_tag = Some(SplitTag::Train);
            train.push(rec);
        }
    }
    Ok((train, valid))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest(n: usize) -> Vec<SegmentRecord> {
        (0..n)
            .map(|i| SegmentRecord::new(&format!("u{i:05}"), "hi", "s", "a"))
            .collect()
    }

    #[test]
    fn sampling_all_returns_everything() {
        let m = manifest(20);
        assert_eq!(sample_segments(&m, 20, 1).unwrap(), m);
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let m = manifest(200);
        let a = sample_segments(&m, 50, 9).unwrap();
        assert_eq!(a, sample_segments(&m, 50, 9).unwrap());
        assert_ne!(a, sample_segments(&m, 50, 10).unwrap());
        let mut rev = m.clone();
        rev.reverse();
        assert_eq!(a, sample_segments(&rev, 50, 9).unwrap());
        assert!(a.windows(2).all(|w| w[0].utt_id < w[1].utt_id));
    }

    #[test]
    fn sampling_too_many_fails() {
        assert!(matches!(
            sample_segments(&manifest(3), 4, 0),
            Err(Error::InsufficientSegments { have: 3, need: 4 })
        ));
    }

    #[test]
    fn seven_languages_thousand_each() {
        let langs = ["fi", "hu", "ja", "mt", "el", "pl", "ta"];
        let m: Vec<_> = langs
            .iter()
            .flat_map(|l| {
                (0..1200).map(move |i| SegmentRecord::new(&format!("{l}-{i:05}"), l, "s", "a"))
            })
            .collect();
        let out = sample_per_language(&m, 1000, 5).unwrap();
        assert_eq!(out.len(), 7000);
        for l in langs {
            assert_eq!(out.iter().filter(|r| r.language == l).count(), 1000);
        }
    }

    #[test]
    fn split_sizes() {
        let m = manifest(7000);
        let (train, valid) = split_validation(&m, 0.05, 1).unwrap();
        assert_eq!((train.len(), valid.len()), (6650, 350));
        let (train, valid) = split_validation(&m, 0.2, 1).unwrap();
        assert_eq!((train.len(), valid.len()), (5600, 1400));
        assert!(split_validation(&m, 0.0, 1).is_err());
        assert!(split_validation(&m, 1.0, 1).is_err());
    }
}
