use std::collections::{HashMap, HashSet};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ProximityRule;
use super::{augment_utterance, AugmentOptions, AugmentationStats, AugmentedTrack, MappingTable};
use crate::error::{Error, Result};
use crate::ipa::{Inventory, Phonation};
use crate::jsonl::{JsonlReader, JsonlWriter};
use crate::track::{ModelTag, PhoneTrack, PhoneTrackRecord};

const BATCH: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MissingPolicy {
    /// A reference utterance without a helper track is an error.
    #[default]
    Fail,
    /// Pass the reference track through unchanged and list it in the stats.
    Skip,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusOptions {
    pub augment: AugmentOptions,
    pub proximity: ProximityRule,
    pub missing: MissingPolicy,
    /// Worker threads; 0 picks the number of available cores.
    pub workers: usize,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions {
            augment: AugmentOptions::default(),
            proximity: ProximityRule::default(),
            missing: MissingPolicy::Fail,
            workers: 1,
        }
    }
}

enum Outcome {
    Augmented(AugmentedTrack),
    Missing(PhoneTrack),
}

fn load_helper(path: &Path, inventory: &Inventory) -> Result<HashMap<String, PhoneTrack>> {
    let mut out = HashMap::new();
    for item in JsonlReader::<PhoneTrackRecord>::open(path)? {
        let (line, rec) = item?;
        let track = PhoneTrack::from_record(rec, inventory).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line,
            message: e.to_string(),
        })?;
        if out.contains_key(&track.utt_id) {
            return Err(Error::DuplicateUtterance(track.utt_id));
        }
        out.insert(track.utt_id.clone(), track);
    }
    Ok(out)
}

pub(crate) fn thread_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))
}

/// Stream the reference file in batches, process each batch in parallel and
/// hand results to `visit` in input order.
fn for_each_utterance(
    rm_path: &Path,
    hm_path: &Path,
    table: &MappingTable,
    inventory: &Inventory,
    opts: &CorpusOptions,
    mut visit: impl FnMut(Outcome) -> Result<()>,
) -> Result<()> {
    let helper = load_helper(hm_path, inventory)?;
    let pool = thread_pool(opts.workers)?;
    let mut seen = HashSet::new();
    let mut reader = JsonlReader::<PhoneTrackRecord>::open(rm_path)?;

    loop {
        let batch: Vec<(usize, PhoneTrackRecord)> =
            reader.by_ref().take(BATCH).collect::<Result<_>>()?;
        if batch.is_empty() {
            return Ok(());
        }
        for (_, rec) in &batch {
            if !seen.insert(rec.utt_id.clone()) {
                return Err(Error::DuplicateUtterance(rec.utt_id.clone()));
            }
        }
        let results: Vec<Result<Outcome>> = pool.install(|| {
            batch
                .into_par_iter()
                .map(|(line, rec)| {
                    let rm = PhoneTrack::from_record(rec, inventory).map_err(|e| Error::Parse {
                        path: rm_path.to_path_buf(),
                        line,
                        message: e.to_string(),
                    })?;
                    match helper.get(&rm.utt_id) {
                        Some(hm) => augment_utterance(
                            &rm,
                            hm,
                            table,
                            &opts.proximity,
                            inventory,
                            &opts.augment,
                        )
                        .map(Outcome::Augmented),
                        None if opts.missing == MissingPolicy::Skip => Ok(Outcome::Missing(rm)),
                        None => Err(Error::MissingCounterpart(rm.utt_id)),
                    }
                })
                .collect()
        });
        for r in results {
            visit(r?)?;
        }
    }
}

/// Augment every reference track in `rm_path` with phonation from the
/// matching helper track in `hm_path`, writing target-model transcriptions to
/// `out_path` ordered by `utt_id`.
///
/// The helper file is indexed in memory; the reference file is read in
/// batches and the output is sorted before writing.
pub fn augment_corpus(
    rm_path: impl AsRef<Path>,
    hm_path: impl AsRef<Path>,
    out_path: impl AsRef<Path>,
    table: &MappingTable,
    inventory: &Inventory,
    opts: &CorpusOptions,
) -> Result<AugmentationStats> {
    let mut tracks = Vec::new();
    let mut stats = AugmentationStats::default();
    for_each_utterance(
        rm_path.as_ref(),
        hm_path.as_ref(),
        table,
        inventory,
        opts,
        |outcome| {
            let mut track = match outcome {
                Outcome::Augmented(out) => {
                    stats.record(&out);
                    out.track
                }
                Outcome::Missing(rm) => {
                    stats.record_missing(&rm);
                    rm
                }
            };
            track.model = ModelTag::Tm;
            tracks.push(track.to_record());
            Ok(())
        },
    )?;
    tracks.sort_by(|a, b| a.utt_id.cmp(&b.utt_id));
    let mut writer = JsonlWriter::create(out_path)?;
    for rec in &tracks {
        writer.write(rec)?;
    }
    writer.finish()?;
    stats.missing_counterparts.sort_unstable();
    Ok(stats)
}

/// Utterances whose augmentation writes at least one aspirated phone, sorted.
pub fn prefilter_by_aspiration(
    rm_path: impl AsRef<Path>,
    hm_path: impl AsRef<Path>,
    table: &MappingTable,
    inventory: &Inventory,
    opts: &CorpusOptions,
) -> Result<Vec<String>> {
    let mut selected = Vec::new();
    for_each_utterance(
        rm_path.as_ref(),
        hm_path.as_ref(),
        table,
        inventory,
        opts,
        |outcome| {
            if let Outcome::Augmented(out) = outcome {
                if out
                    .applied
                    .iter()
                    .any(|&i| out.track.phones[i].phone.phonation() == Phonation::Aspirated)
                {
                    selected.push(out.track.utt_id);
                }
            }
            Ok(())
        },
    )?;
    selected.sort_unstable();
    Ok(selected)
}
