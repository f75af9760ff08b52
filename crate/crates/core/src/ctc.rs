//! Best-path CTC collapse with frame timestamps.
//!
//! A CTC model emits one label per encoder frame. Collapsing merges runs of
//! identical labels and drops blanks; each surviving run keeps the first and
//! last frame it covered, which is the approximate alignment the matcher in
//! [`crate::augment`] relies on. Frames are kept as integer indices and only
//! converted to milliseconds for reporting.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ipa::{tokenize_spans, Inventory};
use crate::track::{ModelTag, PhoneTrack, TimedPhone};

pub const DEFAULT_BLANK: &str = "_";

/// Per-frame best-path labels for one utterance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FramePath {
    pub utt_id: String,
    pub frame_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blank: Option<String>,
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelTag>,
}

/// A collapsed label run with its inclusive frame span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub token: String,
    pub start: u32,
    pub end: u32,
}

/// Merge consecutive identical labels and drop blank runs.
///
/// Repeats separated by a blank come out as separate runs.
pub fn greedy_collapse<S: AsRef<str>>(labels: &[S], blank: &str) -> Vec<Run> {
    let mut runs: Vec<Run> = Vec::new();
    let mut prev: Option<&str> = None;
    for (frame, label) in labels.iter().enumerate() {
        let label = label.as_ref();
        let frame = frame as u32;
        if prev == Some(label) {
            if label != blank {
                runs.last_mut().expect("open run").end = frame;
            }
        } else if label != blank {
            runs.push(Run {
                token: label.to_string(),
                start: frame,
                end: frame,
            });
        }
        prev = Some(label);
    }
    runs
}

impl FramePath {
    pub fn validate(&self) -> Result<()> {
        let bad = |reason: &str| Error::InvalidFramePath {
            utt_id: self.utt_id.clone(),
            reason: reason.to_string(),
        };
        if self.utt_id.is_empty() {
            return Err(bad("empty utt_id"));
        }
        if !(self.frame_ms.is_finite() && self.frame_ms > 0.0) {
            return Err(bad("frame_ms must be positive"));
        }
        if self.labels.len() > u32::MAX as usize {
            return Err(bad("too many frames"));
        }
        Ok(())
    }

    /// Render a track back into frame labels: each phone's characters fill its
    /// span (the base takes the leading frames, each diacritic one trailing
    /// frame) and uncovered frames are blank. Fails if a span is too short for
    /// its characters, if spans overlap, or if two adjacent phones would merge
    /// under collapse.
    pub fn from_track(track: &PhoneTrack, blank: &str) -> Result<Self> {
        let bad = |reason: String| Error::InvalidTrack {
            utt_id: track.utt_id.clone(),
            reason,
        };
        let len = track.phones.last().map_or(0, |tp| tp.end as usize + 1);
        let mut labels = vec![blank.to_string(); len];
        let mut prev_end: Option<u32> = None;
        for (i, tp) in track.phones.iter().enumerate() {
            if let Some(end) = prev_end {
                if tp.start <= end {
                    return Err(bad(format!("phone {i} overlaps its predecessor")));
                }
            }
            let mut units: Vec<String> = vec![tp.phone.base().to_string()];
            units.extend(tp.phone.diacritics().iter().map(|d| d.mark.to_string()));
            let n = units.len() as u32;
            if tp.frames() < n {
                return Err(bad(format!("phone {i} spans fewer frames than characters")));
            }
            if units.windows(2).any(|w| w[0] == w[1]) {
                return Err(bad(format!("phone {i} repeats a mark that would collapse")));
            }
            if tp.start > 0 && labels[tp.start as usize - 1] == units[0] {
                return Err(bad(format!("phone {i} would merge with its predecessor")));
            }
            let base_end = tp.end - (n - 1);
            for f in tp.start..=base_end {
                labels[f as usize] = units[0].clone();
            }
            for (k, unit) in units.iter().enumerate().skip(1) {
                labels[(base_end + k as u32) as usize] = unit.clone();
            }
            prev_end = Some(tp.end);
        }
        Ok(FramePath {
            utt_id: track.utt_id.clone(),
            frame_ms: track.frame_ms,
            blank: Some(blank.to_string()),
            labels,
            model: Some(track.model),
        })
    }
}

/// Collapse `path` and segment the surviving characters into phones.
///
/// A phone's span runs from the first frame of its first character run to the
/// last frame of its last one, so a diacritic emitted a few frames after its
/// base stretches the phone. A diacritic with nothing before it is an error.
/// The track's model tag comes from the path, or [`ModelTag::Other`].
pub fn decode_track(path: &FramePath, blank: &str, inventory: &Inventory) -> Result<PhoneTrack> {
    path.validate()?;
    let runs = greedy_collapse(&path.labels, blank);

    let mut text = String::new();
    let mut owner = Vec::new();
    for (r, run) in runs.iter().enumerate() {
        text.push_str(&run.token);
        owner.resize(text.len(), r);
    }

    let phones = tokenize_spans(&text, inventory)?
        .into_iter()
        .map(|(phone, span)| TimedPhone {
            phone,
            start: runs[owner[span.start]].start,
            end: runs[owner[span.end - 1]].end,
        })
        .collect();

    let track = PhoneTrack {
        utt_id: path.utt_id.clone(),
        model: path.model.unwrap_or(ModelTag::Other),
        frame_ms: path.frame_ms,
        phones,
    };
    track.validate()?;
    Ok(track)
}
