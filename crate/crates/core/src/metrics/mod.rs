//! Onset plosive evaluation against signed voice onset times.
//!
//! Each [`EvalInstance`] pairs a target phoneme and a measured VOT with the
//! first phones a model predicted. [`Classifier`] maps the prediction to a
//! [`RealizationClass`]; the scores in [`scores`] aggregate classes into
//! VoicingAcc (/b d g/), Asp% (/p t k/), Ten% (all six) and NULL. Ambiguous
//! aspiration (a tenuis plosive followed by a homorganic voiceless continuant,
//! as in `kx` or `kh`) is counted as tenuis in strict mode and as aspirated in
//! lenient mode.

mod boxplot;
mod classify;
mod report;
pub mod scores;
mod significance;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::ipa::Place;
use crate::track::ModelTag;

pub use boxplot::{boxplot_csv, boxplot_rows, quantile, BoxplotRow, FiveNumber};
pub use classify::{
    classify_prediction, Classification, Classifier, ContinuantMap, OnTokenizeError,
};
pub use report::{evaluate, Evaluation, MetricsReport, ReportOptions, ValueDisplay};
pub use scores::{
    asp_pct, null_pct, relative_change, ten_pct, voicing_acc, Mode, Outcome, Scores, Tally,
};
pub use significance::{mcnemar_exact, paired_voicing_tests, PairedTest};

/// German plosive phonemes used as evaluation targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Phoneme {
    B,
    D,
    G,
    P,
    T,
    K,
}

impl Phoneme {
    pub const ALL: [Phoneme; 6] = [
        Phoneme::B,
        Phoneme::D,
        Phoneme::G,
        Phoneme::P,
        Phoneme::T,
        Phoneme::K,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Phoneme::B => "b",
            Phoneme::D => "d",
            Phoneme::G => "g",
            Phoneme::P => "p",
            Phoneme::T => "t",
            Phoneme::K => "k",
        }
    }

    /// /b d g/.
    pub fn is_voiced(self) -> bool {
        matches!(self, Phoneme::B | Phoneme::D | Phoneme::G)
    }

    pub fn poa(self) -> PoaGroup {
        match self {
            Phoneme::B | Phoneme::P => PoaGroup::Bilabial,
            Phoneme::D | Phoneme::T => PoaGroup::Alveolar,
            Phoneme::G | Phoneme::K => PoaGroup::Velar,
        }
    }
}

impl fmt::Display for Phoneme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Phoneme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim().trim_matches('/');
        Ok(match s {
            "b" => Phoneme::B,
            "d" => Phoneme::D,
            "g" | "ɡ" => Phoneme::G,
            "p" => Phoneme::P,
            "t" => Phoneme::T,
            "k" => Phoneme::K,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "unknown target phoneme `{s}`"
                )))
            }
        })
    }
}

impl TryFrom<String> for Phoneme {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Error> {
        s.parse()
    }
}

impl From<Phoneme> for String {
    fn from(p: Phoneme) -> String {
        p.as_str().to_string()
    }
}

/// Place-of-articulation groups for per-PoA reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PoaGroup {
    Velar,
    Bilabial,
    Alveolar,
}

impl PoaGroup {
    /// Report order.
    pub const ALL: [PoaGroup; 3] = [PoaGroup::Velar, PoaGroup::Bilabial, PoaGroup::Alveolar];

    pub fn as_str(self) -> &'static str {
        match self {
            PoaGroup::Velar => "velar",
            PoaGroup::Bilabial => "bilabial",
            PoaGroup::Alveolar => "alveolar",
        }
    }

    /// Places a prediction may have without counting as a wrong articulator.
    pub fn admits(self, place: Place) -> bool {
        match self {
            PoaGroup::Bilabial => place == Place::Bilabial,
            PoaGroup::Alveolar => matches!(place, Place::Dental | Place::Alveolar),
            PoaGroup::Velar => matches!(place, Place::Velar | Place::Palatal),
        }
    }

    pub fn phonemes(self) -> [Phoneme; 2] {
        match self {
            PoaGroup::Bilabial => [Phoneme::B, Phoneme::P],
            PoaGroup::Alveolar => [Phoneme::D, Phoneme::T],
            PoaGroup::Velar => [Phoneme::G, Phoneme::K],
        }
    }
}

impl fmt::Display for PoaGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PoaGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "velar" => Ok(PoaGroup::Velar),
            "bilabial" => Ok(PoaGroup::Bilabial),
            "alveolar" => Ok(PoaGroup::Alveolar),
            _ => Err(Error::InvalidArgument(format!("unknown PoA group `{s}`"))),
        }
    }
}

/// How a model realized a target plosive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RealizationClass {
    Voiced,
    Tenuis,
    Aspirated,
    AmbiguousAspirated,
    /// Wrong active articulator or manner.
    Null,
}

impl RealizationClass {
    pub const ALL: [RealizationClass; 5] = [
        RealizationClass::Voiced,
        RealizationClass::Tenuis,
        RealizationClass::Aspirated,
        RealizationClass::AmbiguousAspirated,
        RealizationClass::Null,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RealizationClass::Voiced => "voiced",
            RealizationClass::Tenuis => "tenuis",
            RealizationClass::Aspirated => "aspirated",
            RealizationClass::AmbiguousAspirated => "ambiguous_aspirated",
            RealizationClass::Null => "null",
        }
    }
}

impl fmt::Display for RealizationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One annotated onset and a model's prediction for it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalInstance {
    pub utt_id: String,
    #[serde(alias = "target_phoneme")]
    pub phoneme: Phoneme,
    /// Signed voice onset time; negative means voicing lead.
    pub vot_ms: f64,
    /// Leading phones of the model's transcription.
    #[serde(alias = "predicted_onset")]
    pub onset: String,
    pub model: ModelTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub analyzable: Option<bool>,
}
