//! Timestamped phone sequences and their JSON Lines record form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ipa::{Inventory, Phone};

/// Which model produced a transcription.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ModelTag {
    /// Reference model.
    Rm,
    /// Helper model.
    Hm,
    /// Baseline model.
    Bm,
    /// Target model.
    Tm,
    Other,
}

impl ModelTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelTag::Rm => "RM",
            ModelTag::Hm => "HM",
            ModelTag::Bm => "BM",
            ModelTag::Tm => "TM",
            ModelTag::Other => "OTHER",
        }
    }
}

impl std::fmt::Display for ModelTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ModelTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "RM" => Ok(ModelTag::Rm),
            "HM" => Ok(ModelTag::Hm),
            "BM" => Ok(ModelTag::Bm),
            "TM" => Ok(ModelTag::Tm),
            "OTHER" => Ok(ModelTag::Other),
            _ => Err(Error::InvalidArgument(format!("unknown model tag `{s}`"))),
        }
    }
}

/// A phone with an inclusive frame span.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TimedPhone {
    pub phone: Phone,
    pub start: u32,
    pub end: u32,
}

impl TimedPhone {
    /// Number of frames covered.
    pub fn frames(&self) -> u32 {
        self.end - self.start + 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhoneTrack {
    pub utt_id: String,
    pub model: ModelTag,
    pub frame_ms: f64,
    pub phones: Vec<TimedPhone>,
}

impl PhoneTrack {
    /// Check that the utterance id is set, `frame_ms` is positive, every span is
    /// well formed and start frames never decrease.
    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Error::InvalidTrack {
            utt_id: self.utt_id.clone(),
            reason,
        };
        if self.utt_id.is_empty() {
            return Err(bad("empty utt_id".into()));
        }
        if !(self.frame_ms.is_finite() && self.frame_ms > 0.0) {
            return Err(bad(format!(
                "frame_ms must be positive, got {}",
                self.frame_ms
            )));
        }
        let mut last_start = 0;
        for (i, tp) in self.phones.iter().enumerate() {
            if tp.end < tp.start {
                return Err(bad(format!("phone {i} ends before it starts")));
            }
            if tp.start < last_start {
                return Err(bad(format!("phone {i} starts before phone {}", i - 1)));
            }
            last_start = tp.start;
        }
        Ok(())
    }

    pub fn symbols(&self) -> Vec<String> {
        self.phones.iter().map(|tp| tp.phone.to_string()).collect()
    }

    pub fn to_record(&self) -> PhoneTrackRecord {
        PhoneTrackRecord {
            utt_id: self.utt_id.clone(),
            model: self.model,
            frame_ms: self.frame_ms,
            phones: self
                .phones
                .iter()
                .map(|tp| TimedPhoneRecord {
                    symbol: tp.phone.to_string(),
                    start: tp.start,
                    end: tp.end,
                })
                .collect(),
        }
    }

    pub fn from_record(record: PhoneTrackRecord, inventory: &Inventory) -> Result<Self> {
        let phones = record
            .phones
            .into_iter()
            .map(|p| {
                Ok(TimedPhone {
                    phone: inventory.parse_phone(&p.symbol)?,
                    start: p.start,
                    end: p.end,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let track = PhoneTrack {
            utt_id: record.utt_id,
            model: record.model,
            frame_ms: record.frame_ms,
            phones,
        };
        track.validate()?;
        Ok(track)
    }
}

/// One line of a phone-track file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhoneTrackRecord {
    pub utt_id: String,
    pub model: ModelTag,
    pub frame_ms: f64,
    pub phones: Vec<TimedPhoneRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimedPhoneRecord {
    pub symbol: String,
    pub start: u32,
    pub end: u32,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn record_round_trip() {
        let inv = Inventory::builtin();
        let line = r#"{"utt_id":"u1","model":"RM","frame_ms":20.0,"phones":[{"symbol":"tʰ","start":2,"end":6},{"symbol":"a","start":8,"end":9}]}"#;
        let rec: PhoneTrackRecord = serde_json::from_str(line).unwrap();
        let track = PhoneTrack::from_record(rec, &inv).unwrap();
        assert_eq!(track.phones[0].phone.base(), "t");
        assert_eq!(track.phones[0].frames(), 5);
        assert_eq!(serde_json::to_string(&track.to_record()).unwrap(), line);
    }

    #[test]
    fn rejects_multi_phone_symbol_and_bad_spans() {
        let inv = Inventory::builtin();
        let rec: PhoneTrackRecord = serde_json::from_str(
            r#"{"utt_id":"u1","model":"HM","frame_ms":20.0,"phones":[{"symbol":"ta","start":0,"end":1}]}"#,
        )
        .unwrap();
        assert!(PhoneTrack::from_record(rec, &inv).is_err());
        let rec: PhoneTrackRecord = serde_json::from_str(
            r#"{"utt_id":"u1","model":"HM","frame_ms":20.0,"phones":[{"symbol":"t","start":3,"end":1}]}"#,
        )
        .unwrap();
        assert!(matches!(
            PhoneTrack::from_record(rec, &inv),
            Err(Error::InvalidTrack { .. })
        ));
        let rec: PhoneTrackRecord =
            serde_json::from_str(r#"{"utt_id":"","model":"HM","frame_ms":20.0,"phones":[]}"#)
                .unwrap();
        assert!(PhoneTrack::from_record(rec, &inv).is_err());
    }

    #[test]
    fn model_tag_parsing() {
        assert_eq!("tm".parse::<ModelTag>().unwrap(), ModelTag::Tm);
        assert_eq!(
            serde_json::to_string(&ModelTag::Other).unwrap(),
            "\"OTHER\""
        );
        assert!("XM".parse::<ModelTag>().is_err());
    }
}
