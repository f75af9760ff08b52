use std::collections::{BTreeMap, BTreeSet};

use phonaug::corpus::{
    build_onset_testset, filter_downvoted, onset_phoneme, remap_invalid, sample_segments,
    split_validation, RemapAction, RemapConfig, SegmentRecord, SplitTag,
};
use phonaug::ipa::tokenize_ipa;
use phonaug::Inventory;
use proptest::prelude::*;

fn arb_manifest(max: usize) -> impl Strategy<Value = Vec<SegmentRecord>> {
    let words = prop::sample::select(vec![
        "bad", "Dach", "gut", "Post", "Tag", "Kind", "Auto", "»Ball«", "Mond", "Gras",
    ]);
    let ipa = prop::sample::select(vec![
        "bat", "daχ", "gut", "pɔst", "taːk", "kɪnt", "aʊ̯to", "mɔnt", "Xa",
    ]);
    prop::collection::vec((words, ipa, 0u32..4, any::<bool>()), 0..max).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, (w, t, down, ok))| {
                let mut r = SegmentRecord::new(&format!("seg-{i:05}"), ["de", "nl"][i % 2], w, t);
                r.downvotes = down;
                r.analyzable = Some(ok);
                r
            })
            .collect()
    })
}

fn ids(records: &[SegmentRecord]) -> BTreeSet<String> {
    records.iter().map(|r| r.utt_id.clone()).collect()
}

proptest! {
    #[test]
    fn filter_keeps_exactly_the_low_downvote_records(m in arb_manifest(60), max in 0u32..4) {
        let kept = filter_downvoted(m.clone(), max);
        let expected: Vec<_> = m.iter().filter(|r| r.downvotes <= max).cloned().collect();
        prop_assert_eq!(kept, expected);
    }

    #[test]
    fn split_partitions_the_manifest(m in arb_manifest(80), f in 0.05f64..0.95, seed in any::<u64>()) {
        let (train, valid) = split_validation(&m, f, seed).unwrap();
        prop_assert_eq!(valid.len(), (f * m.len() as f64).round() as usize);
        prop_assert_eq!(train.len() + valid.len(), m.len());
        let (t, v) = (ids(&train), ids(&valid));
        prop_assert!(t.is_disjoint(&v));
        prop_assert_eq!(t.union(&v).cloned().collect::<BTreeSet<_>>(), ids(&m));
        prop_assert!(train.iter().all(|r| r.split_tag == Some(SplitTag::Train)));
        prop_assert!(valid.iter().all(|r| r.split_tag == Some(SplitTag::Valid)));
        prop_assert_eq!(split_validation(&m, f, seed).unwrap(), (train, valid));
    }

    #[test]
    fn sample_is_a_seeded_subset(m in arb_manifest(80), k in 0usize..40, seed in any::<u64>()) {
        match sample_segments(&m, k, seed) {
            Ok(s) => {
                prop_assert_eq!(s.len(), k);
                prop_assert_eq!(ids(&s).len(), k);
                prop_assert!(ids(&s).is_subset(&ids(&m)));
                let mut reversed = m.clone();
                reversed.reverse();
                prop_assert_eq!(sample_segments(&reversed, k, seed).unwrap(), s);
            }
            Err(_) => prop_assert!(m.len() < k),
        }
    }

    #[test]
    fn remap_output_always_tokenizes(m in arb_manifest(40)) {
        let inv = Inventory::builtin();
        let cfg = RemapConfig {
            remap: BTreeMap::from([("χ".to_string(), "x".to_string())]),
            exclude: vec!["X".to_string()],
            normalize_g: true,
        };
        let (kept, report) = remap_invalid(m.clone(), &cfg, &inv);
        for r in &kept {
            prop_assert!(tokenize_ipa(&r.transcription, &inv).is_ok(), "{}", r.transcription);
            prop_assert!(!r.transcription.contains('X'));
        }
        let dropped: BTreeSet<String> = report
            .iter()
            .filter(|e| matches!(e.action, RemapAction::Dropped { .. }))
            .map(|e| e.utt_id.clone())
            .collect();
        prop_assert!(ids(&kept).is_disjoint(&dropped));
        prop_assert_eq!(kept.len() + dropped.len(), m.len());
    }
}

#[test]
fn onset_buckets_hold_only_their_phoneme() {
    let words = ["bad", "Dach", "gut", "Post", "Tag", "Kind", "Auto"];
    let manifest: Vec<SegmentRecord> = (0..700)
        .map(|i| {
            let mut r = SegmentRecord::new(&format!("seg-{i:05}"), "de", words[i % 7], "x");
            r.analyzable = Some(i % 5 != 0);
            r
        })
        .collect();
    let set = build_onset_testset(&manifest, 30, 11).unwrap();
    assert_eq!(set.len(), 180);
    let mut per: BTreeMap<String, usize> = BTreeMap::new();
    for r in &set {
        assert_eq!(r.analyzable, Some(true));
        assert_eq!(r.phoneme.as_deref(), onset_phoneme(&r.sentence));
        *per.entry(r.phoneme.clone().unwrap()).or_default() += 1;
    }
    assert!(per.values().all(|&n| n == 30));
    assert!(build_onset_testset(&manifest, 81, 11).is_err());
}
