//! VoicingAcc, Asp%, Ten% and NULL over classified outcomes.

use serde::{Deserialize, Serialize};

use super::{Phoneme, RealizationClass};
use crate::error::{Error, Result};

/// A classified instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub phoneme: Phoneme,
    pub vot_ms: f64,
    pub class: RealizationClass,
}

impl Outcome {
    pub fn new(phoneme: Phoneme, vot_ms: f64, class: RealizationClass) -> Self {
        Outcome {
            phoneme,
            vot_ms,
            class,
        }
    }

    /// Voicing judged correct: predicted voiced iff the VOT shows voicing lead.
    /// `None` for Null outcomes.
    pub fn voicing_correct(&self) -> Option<bool> {
        (self.class != RealizationClass::Null)
            .then(|| (self.class == RealizationClass::Voiced) == (self.vot_ms < 0.0))
    }
}

/// How ambiguous aspiration enters Asp% and Ten%.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Ambiguous counts as tenuis.
    #[default]
    Strict,
    /// Ambiguous counts as aspirated.
    Lenient,
    /// Ambiguous instances leave the denominator entirely.
    ExcludeAmbiguous,
}

/// Class counts from which every score is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Tally {
    pub instances: u64,
    pub null: u64,
    /// Non-Null /b d g/.
    pub bdg: u64,
    pub bdg_voicing_correct: u64,
    /// Non-Null /p t k/.
    pub ptk: u64,
    pub ptk_aspirated: u64,
    pub ptk_ambiguous: u64,
    /// Non-Null over all six phonemes.
    pub non_null: u64,
    pub tenuis: u64,
    pub ambiguous: u64,
}

impl Tally {
    pub fn add(&mut self, o: &Outcome) {
        self.instances += 1;
        if o.class == RealizationClass::Null {
            self.null += 1;
            return;
        }
        self.non_null += 1;
        match o.class {
            RealizationClass::Tenuis => self.tenuis += 1,
            RealizationClass::AmbiguousAspirated => self.ambiguous += 1,
            _ => {}
        }
        if o.phoneme.is_voiced() {
            self.bdg += 1;
            if o.voicing_correct() == Some(true) {
                self.bdg_voicing_correct += 1;
            }
        } else {
            self.ptk += 1;
            match o.class {
                RealizationClass::Aspirated => self.ptk_aspirated += 1,
                RealizationClass::AmbiguousAspirated => self.ptk_ambiguous += 1,
                _ => {}
            }
        }
    }

    pub fn merge(&mut self, other: &Tally) {
        self.instances += other.instances;
        self.null += other.null;
        self.bdg += other.bdg;
        self.bdg_voicing_correct += other.bdg_voicing_correct;
        self.ptk += other.ptk;
        self.ptk_aspirated += other.ptk_aspirated;
        self.ptk_ambiguous += other.ptk_ambiguous;
        self.non_null += other.non_null;
        self.tenuis += other.tenuis;
        self.ambiguous += other.ambiguous;
    }

    pub fn voicing_acc(&self) -> Result<f64> {
        percent(self.bdg_voicing_correct, self.bdg)
    }

    pub fn asp_pct(&self, mode: Mode) -> Result<f64> {
        match mode {
            Mode::Strict => percent(self.ptk_aspirated, self.ptk),
            Mode::Lenient => percent(self.ptk_aspirated + self.ptk_ambiguous, self.ptk),
            Mode::ExcludeAmbiguous => percent(self.ptk_aspirated, self.ptk - self.ptk_ambiguous),
        }
    }

    pub fn ten_pct(&self, mode: Mode) -> Result<f64> {
        match mode {
            Mode::Strict => percent(self.tenuis + self.ambiguous, self.non_null),
            Mode::Lenient => percent(self.tenuis, self.non_null),
            Mode::ExcludeAmbiguous => percent(self.tenuis, self.non_null - self.ambiguous),
        }
    }

    /// 0 for an empty set.
    pub fn null_pct(&self) -> f64 {
        percent(self.null, self.instances).unwrap_or(0.0)
    }
}

impl<'a> FromIterator<&'a Outcome> for Tally {
    fn from_iter<I: IntoIterator<Item = &'a Outcome>>(iter: I) -> Self {
        let mut t = Tally::default();
        for o in iter {
            t.add(o);
        }
        t
    }
}

fn percent(num: u64, den: u64) -> Result<f64> {
    if den == 0 {
        return Err(Error::EmptyDenominator);
    }
    Ok(100.0 * num as f64 / den as f64)
}

pub fn voicing_acc(outcomes: &[Outcome]) -> Result<f64> {
    outcomes.iter().collect::<Tally>().voicing_acc()
}

pub fn asp_pct(outcomes: &[Outcome], mode: Mode) -> Result<f64> {
    outcomes.iter().collect::<Tally>().asp_pct(mode)
}

pub fn ten_pct(outcomes: &[Outcome], mode: Mode) -> Result<f64> {
    outcomes.iter().collect::<Tally>().ten_pct(mode)
}

pub fn null_pct(outcomes: &[Outcome]) -> f64 {
    outcomes.iter().collect::<Tally>().null_pct()
}

/// `100 · (after − before) / before`.
pub fn relative_change(before: f64, after: f64) -> Result<f64> {
    if before == 0.0 {
        return Err(Error::ZeroBaseline);
    }
    Ok(100.0 * (after - before) / before)
}

/// All cells of one report row; `None` marks an empty denominator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub voicing_acc: Option<f64>,
    pub asp_strict: Option<f64>,
    pub asp_lenient: Option<f64>,
    pub ten_strict: Option<f64>,
    pub ten_lenient: Option<f64>,
    pub null_pct: Option<f64>,
    pub n_instances: u64,
    pub n_null: u64,
    pub n_ambiguous: u64,
}

impl Scores {
    pub fn from_tally(t: &Tally) -> Self {
        Scores {
            voicing_acc: t.voicing_acc().ok(),
            asp_strict: t.asp_pct(Mode::Strict).ok(),
            asp_lenient: t.asp_pct(Mode::Lenient).ok(),
            ten_strict: t.ten_pct(Mode::Strict).ok(),
            ten_lenient: t.ten_pct(Mode::Lenient).ok(),
            null_pct: (t.instances > 0).then(|| t.null_pct()),
            n_instances: t.instances,
            n_null: t.null,
            n_ambiguous: t.ambiguous,
        }
    }

    /// Copy with every percentage rounded to one decimal.
    pub fn rounded(&self) -> Self {
        let r = |v: Option<f64>| v.map(round1);
        Scores {
            voicing_acc: r(self.voicing_acc),
            asp_strict: r(self.asp_strict),
            asp_lenient: r(self.asp_lenient),
            ten_strict: r(self.ten_strict),
            ten_lenient: r(self.ten_lenient),
            null_pct: r(self.null_pct),
            ..*self
        }
    }
}

/// Round half away from zero to one decimal.
pub fn round1(v: f64) -> f64 {
    (v * 10.0).round() / 10.0
}
