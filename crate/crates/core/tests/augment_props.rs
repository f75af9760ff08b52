mod common;

use std::collections::BTreeSet;

use common::{arb_track_spec, track};
use phonaug::augment::{
    augment_track, is_candidate, match_phones, AugmentOptions, MappingTable, ProximityRule,
};
use phonaug::{Inventory, ModelTag};
use proptest::prelude::*;

/// Largest one-to-one matching among candidate pairs, by exhaustive search.
fn max_assignment(cands: &[(usize, usize)]) -> usize {
    fn go(cands: &[(usize, usize)], used_r: &mut Vec<usize>, used_h: &mut Vec<usize>) -> usize {
        let Some((&(i, j), rest)) = cands.split_first() else {
            return 0;
        };
        let skip = go(rest, used_r, used_h);
        if used_r.contains(&i) || used_h.contains(&j) {
            return skip;
        }
        used_r.push(i);
        used_h.push(j);
        let take = 1 + go(rest, used_r, used_h);
        used_r.pop();
        used_h.pop();
        skip.max(take)
    }
    go(cands, &mut Vec::new(), &mut Vec::new())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn greedy_agrees_with_brute_force(rm in arb_track_spec(6), hm in arb_track_spec(6)) {
        let inv = Inventory::builtin();
        let table = MappingTable::builtin(&inv).unwrap();
        let rule = ProximityRule::default();
        let rm = track(&inv, "u", ModelTag::Rm, &rm);
        let hm = track(&inv, "u", ModelTag::Hm, &hm);
        let cands: Vec<(usize, usize)> = (0..rm.phones.len())
            .flat_map(|i| (0..hm.phones.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| is_candidate(&rm, i, &hm, j, &table, &rule))
            .collect();
        let got: BTreeSet<(usize, usize)> = match_phones(&rm, &hm, &table, &rule)
            .unwrap()
            .iter()
            .map(|m| (m.rm_index, m.hm_index))
            .collect();
        prop_assert!(got.iter().all(|p| cands.contains(p)));

        let per_hm = |j: usize| cands.iter().filter(|c| c.1 == j).count();
        let per_rm = |i: usize| cands.iter().filter(|c| c.0 == i).count();
        let hm_free = cands.iter().all(|c| per_hm(c.1) == 1);
        if hm_free {
            prop_assert_eq!(got.len(), max_assignment(&cands));
            if cands.iter().all(|c| per_rm(c.0) == 1) {
                prop_assert_eq!(got, cands.iter().copied().collect::<BTreeSet<_>>());
            }
        }
    }

    #[test]
    fn augmentation_laws(rm in arb_track_spec(10), hm in arb_track_spec(10)) {
        let inv = Inventory::builtin();
        let table = MappingTable::builtin(&inv).unwrap();
        let rule = ProximityRule::default();
        let rm = track(&inv, "u", ModelTag::Rm, &rm);
        let hm = track(&inv, "u", ModelTag::Hm, &hm);
        let matches = match_phones(&rm, &hm, &table, &rule).unwrap();
        let out = augment_track(&rm, &matches, &inv, &AugmentOptions::default()).unwrap();
        let matched: BTreeSet<usize> = matches.iter().map(|m| m.rm_index).collect();
        for m in &matches {
            prop_assert!([0, 1].contains(&(m.hm_index as i64 - m.rm_index as i64)));
            let o = &out.track.phones[m.rm_index];
            prop_assert_eq!(o.phone.place(), m.rm_phone.phone.place());
            prop_assert_eq!(o.phone.manner(), m.rm_phone.phone.manner());
            prop_assert_eq!(o.phone.phonation(), m.hm_phone.phone.phonation());
            prop_assert_eq!((o.start, o.end), (m.rm_phone.start, m.rm_phone.end));
        }
        for (i, (a, b)) in rm.phones.iter().zip(&out.track.phones).enumerate() {
            if !matched.contains(&i) {
                prop_assert_eq!(a.phone.to_string(), b.phone.to_string());
                prop_assert_eq!(a, b);
            }
        }
        let again = augment_track(&out.track, &matches, &inv, &AugmentOptions::default()).unwrap();
        prop_assert_eq!(again.track, out.track);
    }
}
