use serde::{Deserialize, Serialize};

use super::MappingTable;
use crate::error::{Error, Result};
use crate::track::{PhoneTrack, TimedPhone};

/// How far apart two spans' start frames may be.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StartSlack {
    Off,
    /// The longer of the two spans, in frames.
    MaxSpan,
    Frames(u32),
}

/// Timestamp gate for a candidate pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProximityRule {
    /// Index window only.
    Unrestricted,
    /// Close if the spans share at least `min_overlap` frames (0 disables the
    /// test) or their start frames differ by at most the slack.
    Gated {
        min_overlap: u32,
        start_slack: StartSlack,
    },
}

impl Default for ProximityRule {
    fn default() -> Self {
        ProximityRule::Gated {
            min_overlap: 1,
            start_slack: StartSlack::MaxSpan,
        }
    }
}

impl ProximityRule {
    pub fn is_close(&self, a: &TimedPhone, b: &TimedPhone) -> bool {
        let ProximityRule::Gated {
            min_overlap,
            start_slack,
        } = *self
        else {
            return true;
        };
        let overlap = i64::from(a.end.min(b.end)) - i64::from(a.start.max(b.start)) + 1;
        if min_overlap > 0 && overlap >= i64::from(min_overlap) {
            return true;
        }
        let diff = a.start.abs_diff(b.start);
        match start_slack {
            StartSlack::Off => false,
            StartSlack::MaxSpan => diff <= a.frames().max(b.frames()),
            StartSlack::Frames(n) => diff <= n,
        }
    }
}

/// A reference phone paired with the helper phone whose phonation it takes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchPair {
    pub rm_index: usize,
    pub hm_index: usize,
    pub rm_phone: TimedPhone,
    pub hm_phone: TimedPhone,
}

/// Whether `hm[j]` may be matched to `rm[i]`, ignoring one-to-one use: the
/// offset is in the table's window, the bases are admitted by some row, and
/// the spans pass the timestamp gate.
pub fn is_candidate(
    rm: &PhoneTrack,
    i: usize,
    hm: &PhoneTrack,
    j: usize,
    table: &MappingTable,
    proximity: &ProximityRule,
) -> bool {
    let (Some(r), Some(h)) = (rm.phones.get(i), hm.phones.get(j)) else {
        return false;
    };
    let offset = j as i64 - i as i64;
    table
        .window_offsets()
        .iter()
        .any(|&o| i64::from(o) == offset)
        && table.admits(r.phone.base(), h.phone.base())
        && proximity.is_close(r, h)
}

/// Greedy left-to-right one-to-one matching.
///
/// For each reference phone in order, the unused candidates at `i + offset`
/// are ranked by offset 0 first, then the smaller start-frame difference, then
/// the smaller offset; the best one is taken.
pub fn match_phones(
    rm: &PhoneTrack,
    hm: &PhoneTrack,
    table: &MappingTable,
    proximity: &ProximityRule,
) -> Result<Vec<MatchPair>> {
    if rm.utt_id != hm.utt_id {
        return Err(Error::UtteranceMismatch {
            rm: rm.utt_id.clone(),
            hm: hm.utt_id.clone(),
        });
    }
    let mut used = vec![false; hm.phones.len()];
    let mut out = Vec::new();
    for (i, r) in rm.phones.iter().enumerate() {
        if !table.covers(r.phone.base()) {
            continue;
        }
        let best = table
            .window_offsets()
            .iter()
            .filter_map(|&o| {
                usize::try_from(i as i64 + i64::from(o))
                    .ok()
                    .map(|j| (o, j))
            })
            .filter(|&(_, j)| j < hm.phones.len() && !used[j])
            .filter(|&(_, j)| is_candidate(rm, i, hm, j, table, proximity))
            .min_by_key(|&(o, j)| (o != 0, r.start.abs_diff(hm.phones[j].start), o.abs(), o));
        if let Some((_, j)) = best {
            used[j] = true;
            out.push(MatchPair {
                rm_index: i,
                hm_index: j,
                rm_phone: r.clone(),
                hm_phone: hm.phones[j].clone(),
            });
        }
    }
    Ok(out)
}
