use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use super::SegmentRecord;
use crate::error::{Error, Result};
use crate::ipa::{normalize_g, tokenize_ipa, Inventory};

/// Rewrite rules for invalid G2P output.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RemapConfig {
    /// Invalid substring → replacement. At each position the longest matching
    /// key wins; replacements are not rescanned.
    #[serde(default)]
    pub remap: BTreeMap<String, String>,
    /// Literal substrings that drop a record if still present after remapping.
    #[serde(default)]
    pub exclude: Vec<String>,
    /// Also rewrite Latin g to script ɡ.
    #[serde(default = "yes")]
    pub normalize_g: bool,
}

fn yes() -> bool {
    true
}

impl RemapConfig {
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: RemapConfig = serde_json::from_str(&text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.remap.keys().any(|k| k.is_empty()) {
            return Err(Error::InvalidArgument("empty remap key".into()));
        }
        if self.exclude.iter().any(|p| p.is_empty()) {
            return Err(Error::InvalidArgument("empty exclude pattern".into()));
        }
        Ok(())
    }

    /// Apply the rewrite rules to one transcription (NFC in, NFC out).
    pub fn rewrite(&self, text: &str) -> String {
        let text: String = text.nfc().collect();
        let mut keys: Vec<&str> = self.remap.keys().map(String::as_str).collect();
        keys.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        let mut out = String::with_capacity(text.len());
        let mut rest = text.as_str();
        'scan: while let Some(ch) = rest.chars().next() {
            for key in &keys {
                if rest.starts_with(key) {
                    out.push_str(&self.remap[*key]);
                    rest = &rest[key.len()..];
                    continue 'scan;
                }
            }
            out.push(ch);
            rest = &rest[ch.len_utf8()..];
        }
        if self.normalize_g {
            out = normalize_g(&out);
        }
        out.nfc().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum RemapAction {
    Rewritten { from: String, to: String },
    Dropped { reason: String },
}

/// One line of the remap report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemapEvent {
    pub utt_id: String,
    #[serde(flatten)]
    pub action: RemapAction,
}

/// Rewrite transcriptions and drop records that stay invalid.
///
/// A record is dropped when its rewritten transcription still contains an
/// exclude pattern or fails to tokenize against `inventory`. Every rewrite
/// and every drop is reported, in manifest order.
pub fn remap_invalid(
    manifest: impl IntoIterator<Item = SegmentRecord>,
    config: &RemapConfig,
    inventory: &Inventory,
) -> (Vec<SegmentRecord>, Vec<RemapEvent>) {
    let mut kept = Vec::new();
    let mut report = Vec::new();
    for mut rec in manifest {
        let rewritten = config.rewrite(&rec.transcription);
        if rewritten != rec.transcription {
            report.push(RemapEvent {
                utt_id: rec.utt_id.clone(),
                action: RemapAction::Rewritten {
                    from: rec.transcription.clone(),
                    to: rewritten.clone(),
                },
            });
        }
        let reason = if let Some(p) = config
            .exclude
            .iter()
            .find(|p| rewritten.contains(p.as_str()))
        {
            Some(format!("contains excluded pattern `{p}`"))
        } else {
            tokenize_ipa(&rewritten, inventory)
                .err()
                .map(|e| e.to_string())
        };
        match reason {
            Some(reason) => report.push(RemapEvent {
                utt_id: rec.utt_id,
                action: RemapAction::Dropped { reason },
            }),
            None => {
                rec.transcription = rewritten;
                kept.push(rec);
            }
        }
    }
    (kept, report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> RemapConfig {
        serde_json::from_str(r#"{"remap": {"ı": "i", "é": "e", "ts": "t͡s"}, "exclude": ["ʕʕ"]}"#)
            .unwrap()
    }

    fn rec(id: &str, t: &str) -> SegmentRecord {
        SegmentRecord::new(id, "tr", "s", t)
    }

    #[test]
    fn invalid_characters_are_remapped() {
        let inv = Inventory::builtin();
        let (kept, report) = remap_invalid(vec![rec("a", "kırouts")], &config(), &inv);
        assert_eq!(kept[0].transcription, "kirout͡s");
        assert_eq!(report.len(), 1);
        assert!(matches!(report[0].action, RemapAction::Rewritten { .. }));
    }

    #[test]
    fn valid_ipa_is_untouched() {
        let inv = Inventory::builtin();
        let (kept, report) = remap_invalid(vec![rec("a", "tʰa")], &config(), &inv);
        assert_eq!(kept, vec![rec("a", "tʰa")]);
        assert!(report.is_empty());
    }

    #[test]
    fn excluded_and_untokenizable_records_are_dropped() {
        let inv = Inventory::builtin();
        let (kept, report) = remap_invalid(
            vec![rec("a", "aʕʕa"), rec("b", "a1"), rec("c", "ga")],
            &config(),
            &inv,
        );
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].transcription, "ɡa");
        let drops: Vec<_> = report
            .iter()
            .filter(|e| matches!(e.action, RemapAction::Dropped { .. }))
            .map(|e| e.utt_id.as_str())
            .collect();
        assert_eq!(drops, ["a", "b"]);
    }

    #[test]
    fn longest_key_wins_and_output_is_not_rescanned() {
        let cfg: RemapConfig =
            serde_json::from_str(r#"{"remap": {"a": "b", "ab": "c", "b": "x"}}"#).unwrap();
        assert_eq!(cfg.rewrite("aab"), "bc");
    }

    #[test]
    fn unknown_config_keys_fail() {
        assert!(serde_json::from_str::<RemapConfig>(r#"{"remaps": {}}"#).is_err());
    }
}
