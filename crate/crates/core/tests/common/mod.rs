#![allow(dead_code)]

use std::path::PathBuf;

use phonaug::ipa::DiacriticKind;
use phonaug::{Inventory, ModelTag, PhoneTrack, TimedPhone};
use proptest::prelude::*;
use unicode_normalization::UnicodeNormalization;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn track(
    inv: &Inventory,
    id: &str,
    model: ModelTag,
    phones: &[(String, u32, u32)],
) -> PhoneTrack {
    PhoneTrack {
        utt_id: id.into(),
        model,
        frame_ms: 20.0,
        phones: phones
            .iter()
            .map(|(s, start, end)| TimedPhone {
                phone: inv.parse_phone(s).unwrap(),
                start: *start,
                end: *end,
            })
            .collect(),
    }
}

/// Phones over {p t k b d ɡ a} with optional ʰ/ʱ, laid out left to right with
/// random spans and gaps.
pub fn arb_track_spec(max_len: usize) -> impl Strategy<Value = Vec<(String, u32, u32)>> {
    let phone = (0usize..7, 0usize..3).prop_map(|(b, m)| {
        let base = ["p", "t", "k", "b", "d", "ɡ", "a"][b];
        let mark = if base == "a" { "" } else { ["", "ʰ", "ʱ"][m] };
        format!("{base}{mark}")
    });
    prop::collection::vec((phone, 1u32..4, 0u32..3), 0..=max_len).prop_map(|items| {
        let mut cursor = 0;
        items
            .into_iter()
            .map(|(p, len, gap)| {
                let start = cursor + gap;
                let end = start + len - 1;
                cursor = end + 1;
                (p, start, end)
            })
            .collect()
    })
}

/// Random phone strings: inventory bases, each with up to three distinct
/// diacritics and at most one spread-glottis mark.
pub fn arb_ipa() -> impl Strategy<Value = String> {
    let inv = Inventory::builtin();
    let bases: Vec<String> = inv.symbols().iter().map(|s| s.to_string()).collect();
    let marks: Vec<(char, DiacriticKind)> = inv.diacritic_marks();
    let phone = (
        prop::sample::select(bases),
        prop::collection::vec(prop::sample::select(marks), 0..3),
    )
        .prop_map(|(base, ms)| {
            let mut s = base;
            let mut spread = false;
            let mut used = Vec::new();
            for (m, k) in ms {
                let is_spread = matches!(k, DiacriticKind::Aspiration | DiacriticKind::Breathy);
                if (is_spread && spread) || used.contains(&m) {
                    continue;
                }
                spread |= is_spread;
                used.push(m);
                s.push(m);
            }
            s
        });
    prop::collection::vec(phone, 0..8).prop_map(|v| v.concat().nfc().collect())
}
