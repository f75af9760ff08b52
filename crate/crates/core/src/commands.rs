//! File-level drivers behind the `phonaug` binary.
//!
//! Each function reads and writes the JSON Lines formats of the owning
//! modules. Outputs are sorted by `utt_id` and rendered deterministically,
//! so reruns with any worker count are byte-identical.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::augment::{self, CorpusOptions, MappingTable};
use crate::corpus::{self, RemapConfig, SegmentRecord, VocabSpec};
use crate::ctc::{self, FramePath, DEFAULT_BLANK};
use crate::error::{Error, Result};
use crate::ipa::Inventory;
use crate::jsonl::{self, JsonlReader};
use crate::metrics::{self, Classifier, ContinuantMap, EvalInstance, OnTokenizeError};
use crate::metrics::{Evaluation, ReportOptions};
use crate::synth::{self, InstanceSpec, ScenarioSpec};
use crate::track::{ModelTag, PhoneTrack};

/// Shared data files, all parsed before a command touches its inputs.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub inventory: Option<PathBuf>,
    pub mapping: Option<PathBuf>,
    pub continuants: Option<PathBuf>,
    pub workers: usize,
}

pub struct Resources {
    pub inventory: Inventory,
    pub mapping: MappingTable,
    pub continuants: ContinuantMap,
    pub workers: usize,
}

impl RunConfig {
    pub fn load(&self) -> Result<Resources> {
        let inventory = match &self.inventory {
            Some(p) => Inventory::from_path(p).map_err(|e| config_error(p, e))?,
            None => Inventory::builtin(),
        };
        let mapping = match &self.mapping {
            Some(p) => MappingTable::from_path(p, &inventory).map_err(|e| config_error(p, e))?,
            None => MappingTable::builtin(&inventory)?,
        };
        let continuants = match &self.continuants {
            Some(p) => ContinuantMap::from_path(p, &inventory).map_err(|e| config_error(p, e))?,
            None => ContinuantMap::builtin(&inventory),
        };
        Ok(Resources {
            inventory,
            mapping,
            continuants,
            workers: self.workers,
        })
    }
}

fn config_error(path: &Path, e: Error) -> Error {
    match e {
        Error::Io { .. } => e,
        e => Error::Config {
            path: path.to_path_buf(),
            message: e.to_string(),
        },
    }
}

impl Resources {
    fn pool(&self) -> Result<rayon::ThreadPool> {
        augment::thread_pool(self.workers)
    }
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

// ---------------------------------------------------------------- decode

#[derive(Debug, Clone)]
pub struct DecodeArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    /// Blank label for paths that do not name their own.
    pub blank: String,
    /// Frame duration for paths that do not carry one.
    pub frame_ms: Option<f64>,
    /// Model tag for paths that do not carry one.
    pub model: Option<ModelTag>,
}

impl DecodeArgs {
    pub fn new(input: impl Into<PathBuf>, output: impl Into<PathBuf>) -> Self {
        DecodeArgs {
            input: input.into(),
            output: output.into(),
            blank: DEFAULT_BLANK.into(),
            frame_ms: None,
            model: None,
        }
    }
}

#[derive(Deserialize)]
struct FramePathRecord {
    utt_id: String,
    #[serde(default)]
    frame_ms: Option<f64>,
    #[serde(default)]
    blank: Option<String>,
    labels: Vec<String>,
    #[serde(default)]
    model: Option<ModelTag>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DecodeSummary {
    pub utterances: usize,
    pub phones: usize,
}

/// Collapse every frame path in `args.input` into a phone track.
pub fn decode(args: &DecodeArgs, res: &Resources) -> Result<DecodeSummary> {
    let mut paths = Vec::new();
    let mut seen = HashSet::new();
    for item in JsonlReader::<FramePathRecord>::open(&args.input)? {
        let (line, rec) = item?;
        let frame_ms = rec.frame_ms.or(args.frame_ms).ok_or_else(|| Error::Parse {
            path: args.input.clone(),
            line,
            message: "frame_ms missing and no default given".into(),
        })?;
        if !seen.insert(rec.utt_id.clone()) {
            return Err(Error::DuplicateUtterance(rec.utt_id));
        }
        paths.push((
            line,
            FramePath {
                utt_id: rec.utt_id,
                frame_ms,
                blank: rec.blank,
                labels: rec.labels,
                model: rec.model.or(args.model),
            },
        ));
    }
    let tracks: Vec<PhoneTrack> = res.pool()?.install(|| {
        paths
            .par_iter()
            .map(|(line, path)| {
                let blank = path.blank.as_deref().unwrap_or(&args.blank);
                ctc::decode_track(path, blank, &res.inventory).map_err(|e| Error::Parse {
                    path: args.input.clone(),
                    line: *line,
                    message: e.to_string(),
                })
            })
            .collect::<Result<_>>()
    })?;
    let mut records: Vec<_> = tracks.iter().map(PhoneTrack::to_record).collect();
    records.sort_by(|a, b| a.utt_id.cmp(&b.utt_id));
    jsonl::write_all(&args.output, &records)?;
    Ok(DecodeSummary {
        utterances: records.len(),
        phones: records.iter().map(|r| r.phones.len()).sum(),
    })
}

// ---------------------------------------------------------------- augment

#[derive(Debug, Clone)]
pub struct AugmentArgs {
    pub rm: PathBuf,
    pub hm: PathBuf,
    pub output: PathBuf,
    /// Where to write the stats JSON.
    pub stats: Option<PathBuf>,
    pub options: CorpusOptions,
}

pub fn augment(args: &AugmentArgs, res: &Resources) -> Result<augment::AugmentationStats> {
    let mut options = args.options.clone();
    options.workers = res.workers;
    let stats = augment::augment_corpus(
        &args.rm,
        &args.hm,
        &args.output,
        &res.mapping,
        &res.inventory,
        &options,
    )?;
    if let Some(path) = &args.stats {
        write_json(path, &stats)?;
    }
    Ok(stats)
}

/// Write the ids of utterances whose augmentation yields an aspirated phone,
/// one per line.
pub fn prefilter_aspiration(args: &AugmentArgs, res: &Resources) -> Result<Vec<String>> {
    let mut options = args.options.clone();
    options.workers = res.workers;
    let ids = augment::prefilter_by_aspiration(
        &args.rm,
        &args.hm,
        &res.mapping,
        &res.inventory,
        &options,
    )?;
    let mut text = ids.join("\n");
    if !ids.is_empty() {
        text.push('\n');
    }
    write_text(&args.output, &text)?;
    Ok(ids)
}

// ---------------------------------------------------------------- prepare

#[derive(Debug, Clone)]
pub enum PrepareOp {
    Filter {
        max_downvotes: u32,
    },
    Sample {
        n: usize,
        seed: u64,
        per_language: bool,
    },
    Split {
        fraction: f64,
        seed: u64,
        /// Output for the validation part; the training part goes to `output`.
        valid_output: PathBuf,
    },
    Remap {
        config: PathBuf,
        report: PathBuf,
    },
    OnsetTestset {
        per_phoneme_n: usize,
        seed: u64,
    },
    CleanVocab {
        vocab: PathBuf,
        remove: Vec<String>,
        add: Vec<String>,
        id_map: Option<PathBuf>,
    },
}

#[derive(Debug, Clone)]
pub struct PrepareArgs {
    pub input: PathBuf,
    pub output: PathBuf,
    pub op: PrepareOp,
}

/// Number of records (or vocabulary tokens) written to `args.output`.
pub fn prepare(args: &PrepareArgs, res: &Resources) -> Result<usize> {
    // config files first, so a bad config fails before any input is read
    let remap_config = match &args.op {
        PrepareOp::Remap { config, .. } => {
            Some(RemapConfig::from_path(config).map_err(|e| config_error(config, e))?)
        }
        _ => None,
    };
    let vocab = match &args.op {
        PrepareOp::CleanVocab { vocab, .. } => {
            Some(VocabSpec::from_path(vocab).map_err(|e| config_error(vocab, e))?)
        }
        _ => None,
    };
    let manifest = corpus::read_manifest(&args.input)?;
    let out: Vec<SegmentRecord> = match &args.op {
        PrepareOp::Filter { max_downvotes } => corpus::filter_downvoted(manifest, *max_downvotes),
        PrepareOp::Sample {
            n,
            seed,
            per_language,
        } => {
            if *per_language {
                corpus::sample_per_language(&manifest, *n, *seed)?
            } else {
                corpus::sample_segments(&manifest, *n, *seed)?
            }
        }
        PrepareOp::Split {
            fraction,
            seed,
            valid_output,
        } => {
            let (train, valid) = corpus::split_validation(&manifest, *fraction, *seed)?;
            corpus::write_manifest(valid_output, &valid)?;
            train
        }
        PrepareOp::Remap { report, .. } => {
            let cfg = remap_config.expect("loaded above");
            let (kept, events) = corpus::remap_invalid(manifest, &cfg, &res.inventory);
            jsonl::write_all(report, &events)?;
            kept
        }
        PrepareOp::OnsetTestset {
            per_phoneme_n,
            seed,
        } => corpus::build_onset_testset(&manifest, *per_phoneme_n, *seed)?,
        PrepareOp::CleanVocab {
            remove,
            add,
            id_map,
            ..
        } => {
            let mut vocab = vocab.expect("loaded above");
            vocab.removed.extend(remove.iter().cloned());
            for t in add {
                if !vocab.added.contains(t) {
                    vocab.added.push(t.clone());
                }
            }
            let cleaned = corpus::clean_vocab(&vocab, &manifest)?;
            write_json(&args.output, &cleaned.vocab)?;
            if let Some(path) = id_map {
                write_json(path, &cleaned.id_map)?;
            }
            return Ok(cleaned.vocab.tokens.len());
        }
    };
    corpus::write_manifest(&args.output, &out)?;
    Ok(out.len())
}

// ---------------------------------------------------------------- synth

#[derive(Debug, Clone)]
pub struct SynthArgs {
    pub out_dir: PathBuf,
    pub scenario: ScenarioSpec,
    pub instances: InstanceSpec,
}

/// File names written by [`synth`].
pub mod synth_files {
    pub const RM_TRACKS: &str = "rm_tracks.jsonl";
    pub const HM_TRACKS: &str = "hm_tracks.jsonl";
    pub const RM_PATHS: &str = "rm_paths.jsonl";
    pub const HM_PATHS: &str = "hm_paths.jsonl";
    pub const TRUTH: &str = "truth.jsonl";
    pub const INSTANCES: &str = "instances.jsonl";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SynthSummary {
    pub utterances: usize,
    pub truth_matches: usize,
    pub instances: usize,
}

/// Write paired tracks, their frame paths, the intended matches and a set of
/// onset evaluation instances into `args.out_dir`.
pub fn synth(args: &SynthArgs, res: &Resources) -> Result<SynthSummary> {
    use synth_files::*;
    create_dir(&args.out_dir)?;
    let scenario = res
        .pool()?
        .install(|| synth::generate(&args.scenario, &res.inventory))?;
    let instances = synth::generate_instances(&args.instances)?;
    let dir = &args.out_dir;
    let records = |tracks: &[PhoneTrack]| tracks.iter().map(|t| t.to_record()).collect::<Vec<_>>();
    let paths = |tracks: &[PhoneTrack]| {
        tracks
            .iter()
            .map(|t| FramePath::from_track(t, DEFAULT_BLANK))
            .collect::<Result<Vec<_>>>()
    };
    jsonl::write_all(dir.join(RM_TRACKS), &records(&scenario.rm))?;
    jsonl::write_all(dir.join(HM_TRACKS), &records(&scenario.hm))?;
    jsonl::write_all(dir.join(RM_PATHS), &paths(&scenario.rm)?)?;
    jsonl::write_all(dir.join(HM_PATHS), &paths(&scenario.hm)?)?;
    jsonl::write_all(dir.join(TRUTH), &scenario.truth)?;
    jsonl::write_all(dir.join(INSTANCES), &instances)?;
    Ok(SynthSummary {
        utterances: scenario.rm.len(),
        truth_matches: scenario.truth.len(),
        instances: instances.len(),
    })
}

// ---------------------------------------------------------------- evaluate

#[derive(Debug, Clone)]
pub struct EvaluateArgs {
    pub instances: PathBuf,
    pub out_dir: PathBuf,
    pub report: ReportOptions,
    pub fail_on_tokenize_error: bool,
}

/// File names written by [`evaluate`].
pub mod report_files {
    pub const TEXT: &str = "report.txt";
    pub const JSON: &str = "report.json";
    pub const BOXPLOT: &str = "boxplot.csv";
}

pub fn evaluate(args: &EvaluateArgs, res: &Resources) -> Result<Evaluation> {
    let instances: Vec<EvalInstance> = jsonl::read_all(&args.instances)?;
    let mut classifier = Classifier::new(&res.inventory, &res.continuants);
    if args.fail_on_tokenize_error {
        classifier.on_error = OnTokenizeError::Fail;
    }
    let eval = res
        .pool()?
        .install(|| metrics::evaluate(&instances, &classifier, &args.report))?;
    create_dir(&args.out_dir)?;
    write_text(
        &args.out_dir.join(report_files::TEXT),
        &eval.render_text(args.report.display),
    )?;
    write_json(&args.out_dir.join(report_files::JSON), &eval.to_json())?;
    write_text(
        &args.out_dir.join(report_files::BOXPLOT),
        &metrics::boxplot_csv(&eval.boxplots),
    )?;
    Ok(eval)
}
