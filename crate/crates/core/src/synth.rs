//! Synthetic paired reference/helper tracks and onset evaluation sets with
//! known ground truth.
//!
//! Utterance `i` draws from ChaCha8 stream `i` of the scenario seed, so
//! generation can run in parallel and any single utterance can be rebuilt on
//! its own. Filler phones are vowels, which no mapping table entry mentions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ipa::{Inventory, Phonation, Phone};
use crate::metrics::{EvalInstance, Phoneme};
use crate::rng;
use crate::track::{ModelTag, PhoneTrack, TimedPhone};

const PLOSIVES: [&str; 6] = ["p", "t", "k", "b", "d", "ɡ"];
const FILLERS: [&str; 5] = ["a", "e", "i", "o", "u"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub seed: u64,
    pub n_utterances: usize,
    /// Chance that a reference phone is a plosive rather than a filler.
    pub plosive_rate: f64,
    /// Chance that a voiceless helper counterpart is aspirated.
    pub hm_aspiration_rate: f64,
    /// Chance that a helper counterpart is voiced.
    pub hm_voicing_rate: f64,
    /// Chance that a voiced helper counterpart is breathy.
    pub hm_breathy_rate: f64,
    /// Largest shift, in frames, of a helper span edge.
    #[serde(default)]
    pub jitter: u32,
    /// Chance that a plosive has no helper counterpart (a filler sits there).
    #[serde(default)]
    pub drop_rate: f64,
    #[serde(default = "default_phones")]
    pub phones_per_utterance: usize,
    #[serde(default = "default_frame_ms")]
    pub frame_ms: f64,
}

fn default_phones() -> usize {
    8
}

fn default_frame_ms() -> f64 {
    20.0
}

impl Default for ScenarioSpec {
    fn default() -> Self {
        ScenarioSpec {
            seed: 0,
            n_utterances: 100,
            plosive_rate: 0.5,
            hm_aspiration_rate: 0.5,
            hm_voicing_rate: 0.3,
            hm_breathy_rate: 0.2,
            jitter: 0,
            drop_rate: 0.0,
            phones_per_utterance: default_phones(),
            frame_ms: default_frame_ms(),
        }
    }
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("plosive_rate", self.plosive_rate),
            ("hm_aspiration_rate", self.hm_aspiration_rate),
            ("hm_voicing_rate", self.hm_voicing_rate),
            ("hm_breathy_rate", self.hm_breathy_rate),
            ("drop_rate", self.drop_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be in [0, 1], got {p}"
                )));
            }
        }
        if !(self.frame_ms.is_finite() && self.frame_ms > 0.0) {
            return Err(Error::InvalidArgument("frame_ms must be positive".into()));
        }
        if self.jitter > 1000 {
            return Err(Error::InvalidArgument("jitter above 1000 frames".into()));
        }
        Ok(())
    }
}

/// An intended reference/helper correspondence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthMatch {
    pub utt_id: String,
    pub rm_index: usize,
    pub hm_index: usize,
    pub phonation: Phonation,
    /// Reference phone rewritten with the helper's phonation.
    pub expected: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub rm: Vec<PhoneTrack>,
    pub hm: Vec<PhoneTrack>,
    pub truth: Vec<TruthMatch>,
}

pub fn utt_id(index: usize) -> String {
    format!("synth-{index:06}")
}

/// Build a scenario; a pure function of `spec`.
pub fn generate(spec: &ScenarioSpec, inventory: &Inventory) -> Result<Scenario> {
    spec.validate()?;
    let parts: Vec<_> = (0..spec.n_utterances)
        .into_par_iter()
        .map(|i| utterance(spec, i, inventory))
        .collect::<Result<_>>()?;
    let mut scenario = Scenario {
        rm: Vec::with_capacity(parts.len()),
        hm: Vec::with_capacity(parts.len()),
        truth: Vec::new(),
    };
    for (rm, hm, truth) in parts {
        scenario.rm.push(rm);
        scenario.hm.push(hm);
        scenario.truth.extend(truth);
    }
    Ok(scenario)
}

fn utterance(
    spec: &ScenarioSpec,
    index: usize,
    inv: &Inventory,
) -> Result<(PhoneTrack, PhoneTrack, Vec<TruthMatch>)> {
    let mut r = rng::seeded_stream(spec.seed, index as u64);
    let id = utt_id(index);
    let j = spec.jitter;
    let pick = |r: &mut _, set: &[&'static str]| set[rng::below(r, set.len() as u64) as usize];

    let mut rm = Vec::with_capacity(spec.phones_per_utterance);
    let mut hm = Vec::with_capacity(spec.phones_per_utterance);
    let mut truth = Vec::new();
    // every span is wide enough to hold base + mark after shrinking by 2·jitter,
    // and every gap wide enough that shifted neighbours never touch
    let mut cursor = j + rng::below(&mut r, 3) as u32;
    let mut prev_hm_end: Option<u32> = None;
    for i in 0..spec.phones_per_utterance {
        let len = 2 + 2 * j + rng::below(&mut r, 2) as u32;
        let (start, end) = (cursor, cursor + len - 1);
        cursor = end + 2 + 2 * j + rng::below(&mut r, 2) as u32;

        let is_plosive = rng::bernoulli(&mut r, spec.plosive_rate);
        let rm_phone = inv.phone(
            pick(&mut r, if is_plosive { &PLOSIVES } else { &FILLERS }),
            &[],
        )?;
        let hm_phone = if !is_plosive {
            rm_phone.clone()
        } else if rng::bernoulli(&mut r, spec.drop_rate) {
            inv.phone(pick(&mut r, &FILLERS), &[])?
        } else {
            let voiced = rng::bernoulli(&mut r, spec.hm_voicing_rate);
            let spread = if voiced {
                rng::bernoulli(&mut r, spec.hm_breathy_rate)
            } else {
                rng::bernoulli(&mut r, spec.hm_aspiration_rate)
            };
            let phonation = Phonation::from_features(voiced, spread);
            let hm_phone = inv.with_phonation(&rm_phone, phonation)?;
            truth.push(TruthMatch {
                utt_id: id.clone(),
                rm_index: i,
                hm_index: i,
                phonation,
                expected: hm_phone.to_string(),
            });
            hm_phone
        };

        let shift = |r: &mut _| rng::below(r, 2 * j as u64 + 1) as i64 - j as i64;
        let hm_start = (start as i64 + shift(&mut r)).max(0) as u32;
        let hm_end = (end as i64 + shift(&mut r)) as u32;
        let hm_start = prev_hm_end.map_or(hm_start, |p| hm_start.max(p + 2));
        let hm_end = hm_end.max(hm_start + units(&hm_phone) - 1);
        prev_hm_end = Some(hm_end);

        rm.push(TimedPhone {
            phone: rm_phone,
            start,
            end,
        });
        hm.push(TimedPhone {
            phone: hm_phone,
            start: hm_start,
            end: hm_end,
        });
    }
    let track = |model, phones| PhoneTrack {
        utt_id: id.clone(),
        model,
        frame_ms: spec.frame_ms,
        phones,
    };
    Ok((track(ModelTag::Rm, rm), track(ModelTag::Hm, hm), truth))
}

fn units(phone: &Phone) -> u32 {
    1 + phone.diacritics().len() as u32
}

/// How a simulated model realizes onset plosives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelProfile {
    pub model: ModelTag,
    pub null_rate: f64,
    /// P(voiced prediction | voicing lead).
    pub hit_lead: f64,
    /// P(voiced prediction | no voicing lead).
    pub false_voiced: f64,
    /// P(aspirated prediction) for /p t k/.
    pub aspirated: f64,
    /// P(ambiguous `h`-release prediction) for /p t k/.
    pub ambiguous: f64,
}

impl ModelProfile {
    /// No aspiration symbol, some `h` releases, weak voicing detection.
    pub fn baseline() -> Self {
        ModelProfile {
            model: ModelTag::Bm,
            null_rate: 0.09,
            hit_lead: 0.3,
            false_voiced: 0.15,
            aspirated: 0.0,
            ambiguous: 0.14,
        }
    }

    pub fn target() -> Self {
        ModelProfile {
            model: ModelTag::Tm,
            null_rate: 0.1,
            hit_lead: 0.8,
            false_voiced: 0.05,
            aspirated: 0.6,
            ambiguous: 0.03,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub seed: u64,
    pub per_phoneme_n: usize,
    /// Share of /b d g/ produced with voicing lead.
    pub voiced_lead_rate: f64,
    pub models: Vec<ModelProfile>,
}

impl Default for InstanceSpec {
    fn default() -> Self {
        InstanceSpec {
            seed: 0,
            per_phoneme_n: 40,
            voiced_lead_rate: 0.3,
            models: vec![ModelProfile::baseline(), ModelProfile::target()],
        }
    }
}

/// Onset evaluation instances: one utterance per (phoneme, k) with a VOT,
/// and one prediction per model profile. Output is ordered by model, then
/// utterance.
pub fn generate_instances(spec: &InstanceSpec) -> Result<Vec<EvalInstance>> {
    let mut truth = Vec::new();
    let mut r = rng::seeded(spec.seed);
    for p in Phoneme::ALL {
        for k in 0..spec.per_phoneme_n {
            let vot = if p.is_voiced() {
                if rng::bernoulli(&mut r, spec.voiced_lead_rate) {
                    rng::uniform(&mut r, -140.0, -10.0)
                } else {
                    rng::uniform(&mut r, 0.0, 30.0)
                }
            } else {
                rng::uniform(&mut r, 15.0, 110.0)
            };
            truth.push((format!("onset-{p}-{k:04}"), p, (vot * 10.0).round() / 10.0));
        }
    }
    let mut out = Vec::new();
    for (m, profile) in spec.models.iter().enumerate() {
        let mut r = rng::seeded_stream(spec.seed, m as u64 + 1);
        for (id, p, vot) in &truth {
            out.push(EvalInstance {
                utt_id: id.clone(),
                phoneme: *p,
                vot_ms: *vot,
                onset: predict(&mut r, profile, *p, *vot),
                model: profile.model,
                analyzable: Some(true),
            });
        }
    }
    out.sort_by(|a, b| (a.model, &a.utt_id).cmp(&(b.model, &b.utt_id)));
    Ok(out)
}

fn predict(
    r: &mut rand_chacha::ChaCha8Rng,
    profile: &ModelProfile,
    p: Phoneme,
    vot: f64,
) -> String {
    let (voiceless, voiced, wrong) = match p {
        Phoneme::B | Phoneme::P => ("p", "b", "m"),
        Phoneme::D | Phoneme::T => ("t", "d", "n"),
        Phoneme::G | Phoneme::K => ("k", "ɡ", "ŋ"),
    };
    if rng::bernoulli(r, profile.null_rate) {
        return format!("{wrong}a");
    }
    let u = rng::unit(r);
    if p.is_voiced() {
        let p_voiced = if vot < 0.0 {
            profile.hit_lead
        } else {
            profile.false_voiced
        };
        return if u < p_voiced {
            format!("{voiced}a")
        } else {
            format!("{voiceless}a")
        };
    }
    if u < profile.aspirated {
        format!("{voiceless}ʰa")
    } else if u < profile.aspirated + profile.ambiguous {
        format!("{voiceless}ha")
    } else if u < profile.aspirated + profile.ambiguous + profile.false_voiced {
        format!("{voiced}a")
    } else {
        format!("{voiceless}a")
    }
}
