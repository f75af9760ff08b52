use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Phoneme, PoaGroup, RealizationClass};
use crate::error::{Error, Result};
use crate::ipa::{normalize_g, tokenize_ipa, DiacriticKind, Inventory, Manner, Phonation, Phone};

const BUILTIN_CONTINUANTS: &str = include_str!("../../data/continuants.json");

/// Homorganic voiceless continuants (plus `h`) per PoA group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ContinuantMap(BTreeMap<PoaGroup, BTreeSet<String>>);

impl ContinuantMap {
    pub fn builtin(inventory: &Inventory) -> Self {
        Self::from_json_str(BUILTIN_CONTINUANTS, inventory).expect("builtin continuant map")
    }

    pub fn from_path(path: impl AsRef<Path>, inventory: &Inventory) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json_str(&text, inventory)
    }

    pub fn from_json_str(text: &str, inventory: &Inventory) -> Result<Self> {
        let map: ContinuantMap = serde_json::from_str(text)?;
        for sym in map.0.values().flatten() {
            if !inventory.contains(sym) {
                return Err(Error::InvalidArgument(format!(
                    "continuant `{sym}` is not in the inventory"
                )));
            }
        }
        Ok(map)
    }

    pub fn contains(&self, group: PoaGroup, base: &str) -> bool {
        self.0.get(&group).is_some_and(|s| s.contains(base))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OnTokenizeError {
    /// Classify as Null and keep the error message as a diagnostic.
    #[default]
    Null,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub class: RealizationClass,
    pub diagnostic: Option<String>,
}

pub struct Classifier<'a> {
    pub inventory: &'a Inventory,
    pub continuants: &'a ContinuantMap,
    pub on_error: OnTokenizeError,
}

impl<'a> Classifier<'a> {
    pub fn new(inventory: &'a Inventory, continuants: &'a ContinuantMap) -> Self {
        Classifier {
            inventory,
            continuants,
            on_error: OnTokenizeError::Null,
        }
    }

    pub fn classify(&self, target: Phoneme, onset: &str) -> Result<Classification> {
        let phones = match tokenize_ipa(&normalize_g(onset), self.inventory) {
            Ok(p) => p,
            Err(e) if self.on_error == OnTokenizeError::Null => {
                return Ok(Classification {
                    class: RealizationClass::Null,
                    diagnostic: Some(format!("onset `{onset}`: {e}")),
                })
            }
            Err(e) => return Err(e.into()),
        };
        Ok(Classification {
            class: self.classify_phones(target, &phones),
            diagnostic: None,
        })
    }

    fn classify_phones(&self, target: Phoneme, phones: &[Phone]) -> RealizationClass {
        let group = target.poa();
        let Some(first) = phones.first() else {
            return RealizationClass::Null;
        };
        if !group.admits(first.place())
            || !matches!(first.manner(), Manner::Plosive | Manner::Affricate)
        {
            return RealizationClass::Null;
        }
        if first.has(DiacriticKind::Aspiration) {
            return RealizationClass::Aspirated;
        }
        if first.phonation() == Phonation::Tenuis {
            let released = match first.manner() {
                Manner::Affricate => affricate_release(first.base())
                    .is_some_and(|r| self.continuants.contains(group, r)),
                _ => phones.get(1).is_some_and(|next| {
                    !next.phonation().voiced() && self.continuants.contains(group, next.base())
                }),
            };
            if released {
                return RealizationClass::AmbiguousAspirated;
            }
        }
        if first.phonation().voiced() {
            RealizationClass::Voiced
        } else {
            RealizationClass::Tenuis
        }
    }
}

/// Fricative part of an affricate symbol.
fn affricate_release(base: &str) -> Option<&str> {
    if let Some((_, release)) = base.split_once(['\u{361}', '\u{35C}']) {
        return Some(release);
    }
    Some(match base {
        "ʦ" => "s",
        "ʣ" => "z",
        "ʧ" => "ʃ",
        "ʤ" => "ʒ",
        "ʨ" => "ɕ",
        "ʥ" => "ʑ",
        _ => return None,
    })
}

/// Classify with the builtin continuant map; tokenization failures are Null.
pub fn classify_prediction(
    target: Phoneme,
    onset: &str,
    inventory: &Inventory,
    continuants: &ContinuantMap,
) -> RealizationClass {
    Classifier::new(inventory, continuants)
        .classify(target, onset)
        .map(|c| c.class)
        .unwrap_or(RealizationClass::Null)
}
