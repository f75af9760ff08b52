//! IPA segmentation, articulatory features and phonation rewriting.
//!
//! A [`Phone`] is a base symbol (possibly a tie-bar affricate such as `t͡s`)
//! followed by the diacritics attached to it. Features are looked up in an
//! [`Inventory`], which is loaded from JSON so new languages can extend it
//! without a rebuild. All text is NFC-normalized on the way in.

mod inventory;
mod phone;
mod tokenize;

pub use inventory::{BaseEntry, Inventory};
pub use phone::{
    Diacritic, DiacriticKind, Manner, Phonation, Phone, PhoneFeatures, Place, ASPIRATION_MARK,
    BREATHY_MARK,
};
pub(crate) use tokenize::tokenize_spans;
pub use tokenize::{normalize_g, serialize, tokenize_ipa};

/// Errors raised while parsing IPA text or rewriting phones.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IpaError {
    #[error("unknown symbol {ch:?} (U+{:04X}) at byte {offset}", *ch as u32)]
    UnknownSymbol { ch: char, offset: usize },

    #[error("diacritic {ch:?} (U+{:04X}) at byte {offset} has no preceding base", *ch as u32)]
    OrphanDiacritic { ch: char, offset: usize },

    #[error("phone at byte {offset} carries more than one spread-glottis mark")]
    ConflictingSpreadGlottis { offset: usize },

    #[error("base symbol `{0}` has no voicing counterpart")]
    NoVoicingCounterpart(String),

    #[error("unknown base symbol `{0}`")]
    UnknownBase(String),

    #[error("expected exactly one phone in `{text}`, found {found}")]
    NotSinglePhone { text: String, found: usize },

    #[error("invalid inventory: {0}")]
    InvalidInventory(String),
}

/// Phonation of a phone: voicing from the base symbol (a voiceless ring turns
/// it off), spread glottis from `ʰ`/`ʱ`.
pub fn phonation_of(phone: &Phone) -> Phonation {
    phone.phonation()
}

/// Rewrite a plosive so that it carries `target` phonation while keeping its
/// place, manner and unrelated diacritics.
pub fn with_phonation(
    phone: &Phone,
    target: Phonation,
    inventory: &Inventory,
) -> Result<Phone, IpaError> {
    inventory.with_phonation(phone, target)
}
