use std::fmt;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

pub const ASPIRATION_MARK: char = 'ʰ';
pub const BREATHY_MARK: char = 'ʱ';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Place {
    Bilabial,
    Labiodental,
    Dental,
    Alveolar,
    Retroflex,
    Postalveolar,
    Palatal,
    Velar,
    Uvular,
    Glottal,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Manner {
    Plosive,
    Nasal,
    Fricative,
    Affricate,
    Approximant,
    Trill,
    TapFlap,
    Lateral,
    Vowel,
    Other,
}

/// The 2×2 laryngeal grid: [±voiced] × [±spread glottis].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phonation {
    /// Voiceless, unaspirated.
    Tenuis,
    Aspirated,
    Voiced,
    BreathyVoiced,
}

impl Phonation {
    pub const ALL: [Phonation; 4] = [
        Phonation::Tenuis,
        Phonation::Aspirated,
        Phonation::Voiced,
        Phonation::BreathyVoiced,
    ];

    pub const fn from_features(voiced: bool, spread_glottis: bool) -> Self {
        match (voiced, spread_glottis) {
            (false, false) => Phonation::Tenuis,
            (false, true) => Phonation::Aspirated,
            (true, false) => Phonation::Voiced,
            (true, true) => Phonation::BreathyVoiced,
        }
    }

    pub const fn voiced(self) -> bool {
        matches!(self, Phonation::Voiced | Phonation::BreathyVoiced)
    }

    pub const fn spread_glottis(self) -> bool {
        matches!(self, Phonation::Aspirated | Phonation::BreathyVoiced)
    }
}

impl fmt::Display for Phonation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Phonation::Tenuis => "tenuis",
            Phonation::Aspirated => "aspirated",
            Phonation::Voiced => "voiced",
            Phonation::BreathyVoiced => "breathy_voiced",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PhoneFeatures {
    pub place: Place,
    pub manner: Manner,
    pub phonation: Phonation,
}

/// Semantic class of a diacritic mark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiacriticKind {
    Aspiration,
    Breathy,
    /// Voiceless ring, above or below.
    Voiceless,
    /// Dental bridge; moves the place to dental.
    Dental,
    Length,
    Syllabic,
    Nasalization,
    /// Kept verbatim, no feature effect.
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Diacritic {
    pub mark: char,
    pub kind: DiacriticKind,
}

/// One IPA segment. Construct through [`Inventory::phone`](super::Inventory::phone)
/// or [`tokenize_ipa`](super::tokenize_ipa) so the derived features stay in sync
/// with the symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Phone {
    pub(super) base: String,
    pub(super) diacritics: Vec<Diacritic>,
    pub(super) features: PhoneFeatures,
}

impl Phone {
    /// Base symbol, without diacritics (NFC).
    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn diacritics(&self) -> &[Diacritic] {
        &self.diacritics
    }

    pub fn features(&self) -> PhoneFeatures {
        self.features
    }

    pub fn place(&self) -> Place {
        self.features.place
    }

    pub fn manner(&self) -> Manner {
        self.features.manner
    }

    pub fn phonation(&self) -> Phonation {
        self.features.phonation
    }

    pub fn is_plosive(&self) -> bool {
        self.features.manner == Manner::Plosive
    }

    pub fn has(&self, kind: DiacriticKind) -> bool {
        self.diacritics.iter().any(|d| d.kind == kind)
    }

    /// Base followed by diacritics, not normalized.
    pub(crate) fn push_raw(&self, out: &mut String) {
        out.push_str(&self.base);
        out.extend(self.diacritics.iter().map(|d| d.mark));
    }
}

impl fmt::Display for Phone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut raw = String::new();
        self.push_raw(&mut raw);
        let nfc: String = raw.nfc().collect();
        f.write_str(&nfc)
    }
}
