use std::ops::Range;

use unicode_normalization::char::decompose_canonical;
use unicode_normalization::UnicodeNormalization;

use super::phone::{Diacritic, Phone};
use super::{Inventory, IpaError};

/// Split IPA text into phones.
///
/// The input is NFC-normalized first. Base symbols are matched greedily
/// (longest inventory symbol wins, so `t͡s` is one phone), each diacritic
/// attaches to the phone before it, and whitespace separates phones without
/// producing output. Precomposed letters such as `ã` that are not themselves in
/// the inventory are decomposed into base plus diacritics.
pub fn tokenize_ipa(text: &str, inventory: &Inventory) -> Result<Vec<Phone>, IpaError> {
    let normalized = split_after_tie(&text.nfc().collect::<String>(), inventory);
    Ok(tokenize_spans(&normalized, inventory)?
        .into_iter()
        .map(|(phone, _)| phone)
        .collect())
}

/// Concatenate phones without separators; the result is NFC.
pub fn serialize(phones: &[Phone]) -> String {
    let mut raw = String::new();
    for phone in phones {
        phone.push_raw(&mut raw);
    }
    raw.nfc().collect()
}

/// Replace every Latin small g (U+0067) with script ɡ (U+0261).
pub fn normalize_g(text: &str) -> String {
    text.replace('g', "ɡ")
}

const TIE_BARS: [char; 2] = ['\u{361}', '\u{35C}'];

// NFC can fuse the second half of an affricate with a following mark
// (b͡v + ◌̃ → b͡ṽ); undo that so the affricate stays matchable.
fn split_after_tie(text: &str, inventory: &Inventory) -> String {
    let mut out = String::with_capacity(text.len());
    let mut after_tie = false;
    for ch in text.chars() {
        if after_tie && !inventory.symbols().iter().any(|s| s.contains(ch)) {
            decompose_canonical(ch, |c| out.push(c));
        } else {
            out.push(ch);
        }
        after_tie = TIE_BARS.contains(&ch);
    }
    out
}

struct Pending {
    base: String,
    diacritics: Vec<Diacritic>,
    span: Range<usize>,
}

/// Tokenize without normalizing, returning the byte range each phone covers
/// in `text`. Offsets in errors refer to `text`.
pub(crate) fn tokenize_spans(
    text: &str,
    inventory: &Inventory,
) -> Result<Vec<(Phone, Range<usize>)>, IpaError> {
    let mut out = Vec::new();
    let mut pending: Option<Pending> = None;
    let mut pos = 0;

    let flush = |pending: &mut Option<Pending>,
                 out: &mut Vec<(Phone, Range<usize>)>|
     -> Result<(), IpaError> {
        if let Some(p) = pending.take() {
            let phone = inventory.assemble(p.base, p.diacritics, p.span.start)?;
            out.push((phone, p.span));
        }
        Ok(())
    };

    while pos < text.len() {
        let rest = &text[pos..];
        let ch = rest.chars().next().expect("non-empty");
        let ch_len = ch.len_utf8();

        if ch.is_whitespace() {
            flush(&mut pending, &mut out)?;
            pos += ch_len;
            continue;
        }

        if let Some(kind) = inventory.diacritic_kind(ch) {
            let Some(p) = pending.as_mut() else {
                return Err(IpaError::OrphanDiacritic { ch, offset: pos });
            };
            p.diacritics.push(Diacritic { mark: ch, kind });
            p.span.end = pos + ch_len;
            pos += ch_len;
            continue;
        }

        if let Some(len) = inventory.longest_base(rest) {
            flush(&mut pending, &mut out)?;
            pending = Some(Pending {
                base: rest[..len].to_string(),
                diacritics: Vec::new(),
                span: pos..pos + len,
            });
            pos += len;
            continue;
        }

        if let Some((base, diacritics)) = decompose(ch, inventory) {
            flush(&mut pending, &mut out)?;
            pending = Some(Pending {
                base,
                diacritics,
                span: pos..pos + ch_len,
            });
            pos += ch_len;
            continue;
        }

        return Err(IpaError::UnknownSymbol { ch, offset: pos });
    }
    flush(&mut pending, &mut out)?;
    Ok(out)
}

/// Canonical decomposition of a precomposed letter into an inventory base and
/// known diacritics, if it has one.
fn decompose(ch: char, inventory: &Inventory) -> Option<(String, Vec<Diacritic>)> {
    let mut parts = Vec::new();
    decompose_canonical(ch, |c| parts.push(c));
    if parts.len() < 2 {
        return None;
    }
    let base = parts[0].to_string();
    if !inventory.contains(&base) {
        return None;
    }
    let diacritics = parts[1..]
        .iter()
        .map(|&mark| {
            inventory
                .diacritic_kind(mark)
                .map(|kind| Diacritic { mark, kind })
        })
        .collect::<Option<Vec<_>>>()?;
    Some((base, diacritics))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ipa::{DiacriticKind, Manner, Phonation, Place};

    fn inv() -> Inventory {
        Inventory::builtin()
    }

    #[test]
    fn aspirated_t_is_one_phone() {
        let phones = tokenize_ipa("tʰ", &inv()).unwrap();
        assert_eq!(phones.len(), 1);
        assert_eq!(phones[0].base(), "t");
        assert_eq!(phones[0].diacritics().len(), 1);
        assert_eq!(phones[0].diacritics()[0].kind, DiacriticKind::Aspiration);
        assert_eq!(phones[0].phonation(), Phonation::Aspirated);
        assert_eq!(phones[0].place(), Place::Alveolar);
    }

    #[test]
    fn sample_prediction_segments_into_nine_phones() {
        let phones = tokenize_ipa("dankʰɛdafɪ", &inv()).unwrap();
        assert_eq!(phones.len(), 9);
        assert_eq!(phones[3].to_string(), "kʰ");
        assert_eq!(phones[3].base(), "k");
    }

    #[test]
    fn orphan_diacritic() {
        let err = tokenize_ipa("ʰa", &inv()).unwrap_err();
        assert_eq!(
            err,
            IpaError::OrphanDiacritic {
                ch: 'ʰ', offset: 0
            }
        );
        let err = tokenize_ipa("a ʰ", &inv()).unwrap_err();
        assert!(matches!(err, IpaError::OrphanDiacritic { offset: 2, .. }));
    }

    #[test]
    fn unknown_symbol_reports_offset() {
        let err = tokenize_ipa("ab1", &inv()).unwrap_err();
        assert_eq!(err, IpaError::UnknownSymbol { ch: '1', offset: 2 });
        // invalid G2P output: dotless i and e-acute
        assert!(matches!(
            tokenize_ipa("ı", &inv()),
            Err(IpaError::UnknownSymbol { ch: 'ı', .. })
        ));
        assert!(matches!(
            tokenize_ipa("é", &inv()),
            Err(IpaError::UnknownSymbol { ch: 'é', .. })
        ));
        // Latin g is not in the inventory
        assert!(tokenize_ipa("gɛt", &inv()).is_err());
        assert!(tokenize_ipa(&normalize_g("gɛt"), &inv()).is_ok());
    }

    #[test]
    fn whitespace_splits_and_is_dropped() {
        let phones = tokenize_ipa(" t  a\tk ", &inv()).unwrap();
        assert_eq!(serialize(&phones), "tak");
    }

    #[test]
    fn tie_bar_affricate() {
        let phones = tokenize_ipa("t͡sa", &inv()).unwrap();
        assert_eq!(phones.len(), 2);
        assert_eq!(phones[0].manner(), Manner::Affricate);
        assert_eq!(phones[0].base(), "t͡s");
    }

    #[test]
    fn precomposed_letter_is_decomposed() {
        let phones = tokenize_ipa("ã", &inv()).unwrap();
        assert_eq!(phones[0].base(), "a");
        assert!(phones[0].has(DiacriticKind::Nasalization));
        assert_eq!(serialize(&phones), "ã");
        // combining sequence normalizes to the same phone
        assert_eq!(tokenize_ipa("a\u{303}", &inv()).unwrap(), phones);
    }

    #[test]
    fn conflicting_spread_glottis() {
        assert!(matches!(
            tokenize_ipa("atʰʱ", &inv()),
            Err(IpaError::ConflictingSpreadGlottis { offset: 1 })
        ));
    }

    #[test]
    fn serialize_examples() {
        assert_eq!(serialize(&[]), "");
        let inv = inv();
        let phones = vec![
            inv.phone("t", &['ʰ']).unwrap(),
            inv.phone("a", &[]).unwrap(),
        ];
        assert_eq!(serialize(&phones), "tʰa");
    }

    #[test]
    fn every_single_phone_string_round_trips() {
        let inv = inv();
        for sym in inv.symbols() {
            let phones = tokenize_ipa(sym, &inv).unwrap();
            assert_eq!(phones.len(), 1, "{sym}");
            assert_eq!(serialize(&phones), sym);
            for (mark, _) in inv.diacritic_marks() {
                let text: String = format!("{sym}{mark}").nfc().collect();
                let phones = tokenize_ipa(&text, &inv).unwrap();
                assert_eq!(phones.len(), 1, "{text}");
                assert_eq!(serialize(&phones), text);
            }
        }
    }

    #[test]
    fn normalize_g_examples() {
        assert_eq!(normalize_g("gɛt"), "ɡɛt");
        assert_eq!(normalize_g(""), "");
        assert_eq!(normalize_g("ɡ"), "ɡ");
    }
}
