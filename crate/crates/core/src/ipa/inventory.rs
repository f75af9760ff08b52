use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};
use unicode_normalization::char::canonical_combining_class;
use unicode_normalization::UnicodeNormalization;

use super::phone::{
    Diacritic, DiacriticKind, Manner, Phonation, Phone, PhoneFeatures, Place, ASPIRATION_MARK,
    BREATHY_MARK,
};
use super::IpaError;

const BUILTIN_INVENTORY: &str = include_str!("../../data/inventory.json");

/// Features attached to a base symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BaseEntry {
    pub place: Place,
    pub manner: Manner,
    pub voiced: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct InventoryFile {
    phones: Vec<PhoneRow>,
    voicing_pairs: Vec<[String; 2]>,
    diacritics: BTreeMap<String, DiacriticKind>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PhoneRow {
    symbol: String,
    place: Place,
    manner: Manner,
    voiced: bool,
}

/// Symbol table: base symbols with their features, homorganic voicing pairs
/// for plosives, and diacritic semantics. Read-only after loading.
#[derive(Debug, Clone)]
pub struct Inventory {
    bases: HashMap<String, BaseEntry>,
    max_base_chars: usize,
    /// (voiceless, voiced), in file order.
    voicing_pairs: Vec<(String, String)>,
    pair_of: HashMap<String, usize>,
    diacritics: HashMap<char, DiacriticKind>,
}

impl Inventory {
    /// The inventory bundled with the crate (`data/inventory.json`).
    pub fn builtin() -> Self {
        Self::from_json_str(BUILTIN_INVENTORY).expect("bundled inventory is valid")
    }

    pub fn from_path(path: impl AsRef<Path>) -> crate::Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| crate::Error::io(path, e))?;
        Ok(Self::from_json_str(&text)?)
    }

    pub fn from_json_str(text: &str) -> Result<Self, IpaError> {
        let file: InventoryFile =
            serde_json::from_str(text).map_err(|e| IpaError::InvalidInventory(e.to_string()))?;
        Self::from_file(file)
    }

    fn from_file(file: InventoryFile) -> Result<Self, IpaError> {
        let invalid = |msg: String| IpaError::InvalidInventory(msg);

        let mut diacritics = HashMap::new();
        for (mark, kind) in file.diacritics {
            let mut chars = mark.chars();
            let (Some(ch), None) = (chars.next(), chars.next()) else {
                return Err(invalid(format!(
                    "diacritic `{mark}` is not a single code point"
                )));
            };
            diacritics.insert(ch, kind);
        }
        if diacritics.get(&ASPIRATION_MARK) != Some(&DiacriticKind::Aspiration) {
            return Err(invalid("`ʰ` must be registered as aspiration".into()));
        }
        if diacritics.get(&BREATHY_MARK) != Some(&DiacriticKind::Breathy) {
            return Err(invalid("`ʱ` must be registered as breathy".into()));
        }

        let mut bases = HashMap::new();
        let mut max_base_chars = 1;
        for row in file.phones {
            let symbol: String = row.symbol.nfc().collect();
            let Some(first) = symbol.chars().next() else {
                return Err(invalid("empty base symbol".into()));
            };
            if symbol.contains('g') {
                return Err(invalid(format!(
                    "`{symbol}` uses Latin g (U+0067); use script ɡ (U+0261)"
                )));
            }
            if diacritics.contains_key(&first) || first.is_whitespace() {
                return Err(invalid(format!(
                    "base `{symbol}` starts with a diacritic or space"
                )));
            }
            max_base_chars = max_base_chars.max(symbol.chars().count());
            let entry = BaseEntry {
                place: row.place,
                manner: row.manner,
                voiced: row.voiced,
            };
            if bases.insert(symbol.clone(), entry).is_some() {
                return Err(invalid(format!("duplicate base `{symbol}`")));
            }
        }

        let mut voicing_pairs = Vec::new();
        let mut pair_of = HashMap::new();
        for [a, b] in file.voicing_pairs {
            let a: String = a.nfc().collect();
            let b: String = b.nfc().collect();
            let (ea, eb) = match (bases.get(&a), bases.get(&b)) {
                (Some(ea), Some(eb)) => (*ea, *eb),
                _ => {
                    return Err(invalid(format!(
                        "voicing pair {a}/{b} references unknown base"
                    )))
                }
            };
            if ea.voiced == eb.voiced {
                return Err(invalid(format!(
                    "voicing pair {a}/{b} does not contrast voicing"
                )));
            }
            if ea.place != eb.place || ea.manner != eb.manner {
                return Err(invalid(format!("voicing pair {a}/{b} is not homorganic")));
            }
            let (voiceless, voiced) = if ea.voiced { (b, a) } else { (a, b) };
            let idx = voicing_pairs.len();
            for sym in [&voiceless, &voiced] {
                if pair_of.insert(sym.clone(), idx).is_some() {
                    return Err(invalid(format!("`{sym}` appears in two voicing pairs")));
                }
            }
            voicing_pairs.push((voiceless, voiced));
        }

        Ok(Inventory {
            bases,
            max_base_chars,
            voicing_pairs,
            pair_of,
            diacritics,
        })
    }

    pub fn entry(&self, base: &str) -> Option<&BaseEntry> {
        self.bases.get(base)
    }

    pub fn contains(&self, base: &str) -> bool {
        self.bases.contains_key(base)
    }

    pub fn diacritic_kind(&self, mark: char) -> Option<DiacriticKind> {
        self.diacritics.get(&mark).copied()
    }

    /// All base symbols, sorted.
    pub fn symbols(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self.bases.keys().map(String::as_str).collect();
        out.sort_unstable();
        out
    }

    /// All diacritic marks, sorted by code point.
    pub fn diacritic_marks(&self) -> Vec<(char, DiacriticKind)> {
        let mut out: Vec<_> = self.diacritics.iter().map(|(c, k)| (*c, *k)).collect();
        out.sort_unstable();
        out
    }

    /// Voicing pairs as (voiceless, voiced).
    pub fn voicing_pairs(&self) -> impl Iterator<Item = (&str, &str)> {
        self.voicing_pairs
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
    }

    /// The member of `base`'s voicing pair with the requested voicing.
    pub fn counterpart(&self, base: &str, voiced: bool) -> Option<&str> {
        let (voiceless, voice) = &self.voicing_pairs[*self.pair_of.get(base)?];
        Some(if voiced { voice } else { voiceless })
    }

    /// Length in bytes of the longest base symbol that prefixes `text`.
    pub(crate) fn longest_base(&self, text: &str) -> Option<usize> {
        let ends: Vec<usize> = text
            .char_indices()
            .skip(1)
            .map(|(i, _)| i)
            .chain(std::iter::once(text.len()))
            .take(self.max_base_chars)
            .collect();
        ends.into_iter()
            .rev()
            .find(|&end| self.bases.contains_key(&text[..end]))
    }

    /// Build a phone from a base symbol and diacritic marks.
    pub fn phone(&self, base: &str, marks: &[char]) -> Result<Phone, IpaError> {
        let mut diacritics = Vec::with_capacity(marks.len());
        for (i, &mark) in marks.iter().enumerate() {
            let kind = self.diacritic_kind(mark).ok_or(IpaError::UnknownSymbol {
                ch: mark,
                offset: base.len() + i,
            })?;
            diacritics.push(Diacritic { mark, kind });
        }
        let base: String = base.nfc().collect();
        self.assemble(base, diacritics, 0)
    }

    pub(crate) fn assemble(
        &self,
        base: String,
        diacritics: Vec<Diacritic>,
        offset: usize,
    ) -> Result<Phone, IpaError> {
        let entry = *self
            .bases
            .get(&base)
            .ok_or_else(|| IpaError::UnknownBase(base.clone()))?;
        let spread = diacritics
            .iter()
            .filter(|d| matches!(d.kind, DiacriticKind::Aspiration | DiacriticKind::Breathy))
            .count();
        if spread > 1 {
            return Err(IpaError::ConflictingSpreadGlottis { offset });
        }
        let has = |k: DiacriticKind| diacritics.iter().any(|d| d.kind == k);
        let place = if has(DiacriticKind::Dental) {
            Place::Dental
        } else {
            entry.place
        };
        let voiced = entry.voiced && !has(DiacriticKind::Voiceless);
        let features = PhoneFeatures {
            place,
            manner: entry.manner,
            phonation: Phonation::from_features(voiced, spread == 1),
        };
        Ok(Phone {
            base,
            diacritics,
            features,
        })
    }

    /// Parse text that must contain exactly one phone.
    pub fn parse_phone(&self, text: &str) -> Result<Phone, IpaError> {
        let mut phones = super::tokenize_ipa(text, self)?;
        if phones.len() != 1 {
            return Err(IpaError::NotSinglePhone {
                text: text.to_string(),
                found: phones.len(),
            });
        }
        Ok(phones.pop().unwrap())
    }

    /// Swap `phone`'s base within its voicing pair and set the spread-glottis
    /// mark so the result has `target` phonation. Voiceless rings are dropped
    /// (they would override the base voicing); other diacritics are kept in
    /// order, and `ʰ`/`ʱ` goes after the last combining mark.
    pub fn with_phonation(&self, phone: &Phone, target: Phonation) -> Result<Phone, IpaError> {
        let base = self
            .counterpart(phone.base(), target.voiced())
            .ok_or_else(|| IpaError::NoVoicingCounterpart(phone.base().to_string()))?
            .to_string();
        let mut diacritics: Vec<Diacritic> = phone
            .diacritics()
            .iter()
            .copied()
            .filter(|d| {
                !matches!(
                    d.kind,
                    DiacriticKind::Aspiration | DiacriticKind::Breathy | DiacriticKind::Voiceless
                )
            })
            .collect();
        if target.spread_glottis() {
            let (mark, kind) = if target.voiced() {
                (BREATHY_MARK, DiacriticKind::Breathy)
            } else {
                (ASPIRATION_MARK, DiacriticKind::Aspiration)
            };
            let at = diacritics
                .iter()
                .rposition(|d| canonical_combining_class(d.mark) != 0)
                .map_or(0, |i| i + 1);
            diacritics.insert(at, Diacritic { mark, kind });
        }
        self.assemble(base, diacritics, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_loads_and_has_script_g_only() {
        let inv = Inventory::builtin();
        assert!(inv.contains("ɡ"));
        assert!(!inv.contains("g"));
        assert_eq!(inv.voicing_pairs().count(), 5);
    }

    #[test]
    fn voicing_pairs_are_homorganic_and_contrastive() {
        let inv = Inventory::builtin();
        for (voiceless, voiced) in inv.voicing_pairs() {
            let a = inv.entry(voiceless).unwrap();
            let b = inv.entry(voiced).unwrap();
            assert!(!a.voiced && b.voiced, "{voiceless}/{voiced}");
            assert_eq!((a.place, a.manner), (b.place, b.manner));
            assert_eq!(a.manner, Manner::Plosive);
        }
    }

    #[test]
    fn rejects_latin_g() {
        let text = r#"{"phones": [{"symbol": "g", "place": "velar", "manner": "plosive", "voiced": true}],
            "voicing_pairs": [], "diacritics": {"ʰ": "aspiration", "ʱ": "breathy"}}"#;
        let err = Inventory::from_json_str(text).unwrap_err();
        assert!(matches!(err, IpaError::InvalidInventory(_)));
    }

    #[test]
    fn rejects_non_homorganic_pair() {
        let text = r#"{"phones": [
                {"symbol": "p", "place": "bilabial", "manner": "plosive", "voiced": false},
                {"symbol": "d", "place": "alveolar", "manner": "plosive", "voiced": true}],
            "voicing_pairs": [["p", "d"]], "diacritics": {"ʰ": "aspiration", "ʱ": "breathy"}}"#;
        assert!(Inventory::from_json_str(text).is_err());
    }

    #[test]
    fn longest_base_prefers_affricate() {
        let inv = Inventory::builtin();
        assert_eq!(inv.longest_base("t͡sa"), Some("t͡s".len()));
        assert_eq!(inv.longest_base("tsa"), Some(1));
        assert_eq!(inv.longest_base("é"), None);
    }

    #[test]
    fn dental_bridge_moves_place() {
        let inv = Inventory::builtin();
        let t = inv.phone("t", &['\u{32A}']).unwrap();
        assert_eq!(t.place(), Place::Dental);
        assert_eq!(t.manner(), Manner::Plosive);
    }

    #[test]
    fn voiceless_ring_overrides_voicing() {
        let inv = Inventory::builtin();
        let d = inv.phone("d", &['\u{325}']).unwrap();
        assert_eq!(d.phonation(), Phonation::Tenuis);
        let back = inv.with_phonation(&d, Phonation::Voiced).unwrap();
        assert_eq!(back.to_string(), "d");
    }
}
