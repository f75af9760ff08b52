use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use phonaug::augment::{AugmentOptions, CorpusOptions, MissingPolicy, ProximityRule};
use phonaug::commands::{self, PrepareOp, RunConfig};
use phonaug::metrics::{PoaGroup, ReportOptions, ValueDisplay};
use phonaug::synth::{InstanceSpec, ScenarioSpec};
use phonaug::ModelTag;

#[derive(Parser)]
#[command(
    name = "phonaug",
    version,
    about = "Plosive phonation transfer and onset evaluation"
)]
struct Cli {
    /// Phone inventory JSON (default: builtin).
    #[arg(long, global = true)]
    inventory: Option<PathBuf>,
    /// Mapping table JSON (default: builtin).
    #[arg(long, global = true)]
    mapping: Option<PathBuf>,
    /// Homorganic continuant map JSON (default: builtin).
    #[arg(long, global = true)]
    continuants: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Collapse CTC frame paths into timestamped phone tracks.
    Decode {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, default_value = "_")]
        blank: String,
        /// Frame duration for paths without `frame_ms`.
        #[arg(long)]
        frame_ms: Option<f64>,
        /// Model tag for paths without `model`.
        #[arg(long)]
        model: Option<ModelTag>,
    },
    /// Transfer helper phonation onto reference plosives.
    Augment {
        #[command(flatten)]
        pair: PairArgs,
        output: PathBuf,
        /// Write stats JSON here.
        #[arg(long)]
        stats: Option<PathBuf>,
    },
    /// List utterances whose augmentation yields an aspirated plosive.
    PrefilterAspiration {
        #[command(flatten)]
        pair: PairArgs,
        output: PathBuf,
    },
    /// Manifest preparation.
    Prepare {
        #[command(subcommand)]
        op: PrepareCmd,
    },
    /// Generate synthetic tracks, frame paths and onset instances.
    Synth {
        out_dir: PathBuf,
        /// Scenario JSON; flags below are ignored when given.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        utterances: usize,
        #[arg(long, default_value_t = 0.5)]
        plosive_rate: f64,
        #[arg(long, default_value_t = 0.5)]
        aspiration_rate: f64,
        #[arg(long, default_value_t = 0.3)]
        voicing_rate: f64,
        #[arg(long, default_value_t = 0.2)]
        breathy_rate: f64,
        #[arg(long, default_value_t = 0)]
        jitter: u32,
        #[arg(long, default_value_t = 0.0)]
        drop_rate: f64,
        #[arg(long, default_value_t = 20.0)]
        frame_ms: f64,
        /// Onset instances per phoneme and model.
        #[arg(long, default_value_t = 40)]
        per_phoneme: usize,
    },
    /// Score onset predictions and write report.txt, report.json, boxplot.csv.
    Evaluate {
        instances: PathBuf,
        out_dir: PathBuf,
        /// Show strict values only.
        #[arg(long, conflicts_with = "lenient")]
        strict: bool,
        /// Show lenient values only.
        #[arg(long)]
        lenient: bool,
        /// Restrict to one place group (velar, bilabial, alveolar).
        #[arg(long)]
        poa: Option<PoaGroup>,
        /// Abort on untokenizable onsets instead of counting them as NULL.
        #[arg(long)]
        fail_on_tokenize_error: bool,
    },
}

#[derive(Args)]
struct PairArgs {
    /// Reference-model phone tracks.
    rm: PathBuf,
    /// Helper-model phone tracks.
    hm: PathBuf,
    /// Transfer breathy voice as plain voicing.
    #[arg(long)]
    no_breathy: bool,
    /// Pass utterances without a helper track through instead of failing.
    #[arg(long)]
    skip_missing: bool,
}

impl PairArgs {
    fn options(&self) -> CorpusOptions {
        CorpusOptions {
            augment: AugmentOptions {
                breathy: !self.no_breathy,
            },
            proximity: ProximityRule::default(),
            missing: if self.skip_missing {
                MissingPolicy::Skip
            } else {
                MissingPolicy::Fail
            },
            workers: 1,
        }
    }
}

#[derive(Subcommand)]
enum PrepareCmd {
    /// Drop downvoted segments.
    Filter {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, default_value_t = 0)]
        max_downvotes: u32,
    },
    /// Seeded sample without replacement.
    Sample {
        input: PathBuf,
        output: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draw `n` from each language.
        #[arg(long)]
        per_language: bool,
    },
    /// Seeded train/validation split.
    Split {
        input: PathBuf,
        train: PathBuf,
        valid: PathBuf,
        #[arg(long)]
        fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rewrite invalid G2P output and drop what stays invalid.
    Remap {
        input: PathBuf,
        output: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        report: PathBuf,
    },
    /// Absolute-onset plosive test set.
    OnsetTestset {
        input: PathBuf,
        output: PathBuf,
        #[arg(long, default_value_t = 40)]
        per_phoneme: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Remove unused tokens from a CTC vocabulary and add new ones.
    CleanVocab {
        /// Corpus manifest whose transcriptions must stay encodable.
        corpus: PathBuf,
        #[arg(long)]
        vocab: PathBuf,
        output: PathBuf,
        #[arg(long, default_values_t = ["g".to_string()])]
        remove: Vec<String>,
        #[arg(long, default_values_t = ["ʱ".to_string()])]
        add: Vec<String>,
        #[arg(long)]
        id_map: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> phonaug::Result<()> {
    let res = RunConfig {
        inventory: cli.inventory,
        mapping: cli.mapping,
        continuants: cli.continuants,
        workers: cli.workers,
    }
    .load()?;

    match cli.cmd {
        Cmd::Decode {
            input,
            output,
            blank,
            frame_ms,
            model,
        } => {
            let s = commands::decode(
                &commands::DecodeArgs {
                    input,
                    output,
                    blank,
                    frame_ms,
                    model,
                },
                &res,
            )?;
            eprintln!("decoded {} utterances, {} phones", s.utterances, s.phones);
        }
        Cmd::Augment {
            pair,
            output,
            stats,
        } => {
            let options = pair.options();
            let stats = commands::augment(
                &commands::AugmentArgs {
                    rm: pair.rm,
                    hm: pair.hm,
                    output,
                    stats,
                    options,
                },
                &res,
            )?;
            print!("{}", stats.summary());
        }
        Cmd::PrefilterAspiration { pair, output } => {
            let options = pair.options();
            let ids = commands::prefilter_aspiration(
                &commands::AugmentArgs {
                    rm: pair.rm,
                    hm: pair.hm,
                    output,
                    stats: None,
                    options,
                },
                &res,
            )?;
            eprintln!("selected {} utterances", ids.len());
        }
        Cmd::Prepare { op } => {
            let (input, output, op) = match op {
                PrepareCmd::Filter {
                    input,
                    output,
                    max_downvotes,
                } => (input, output, PrepareOp::Filter { max_downvotes }),
                PrepareCmd::Sample {
                    input,
                    output,
                    n,
                    seed,
                    per_language,
                } => (
                    input,
                    output,
                    PrepareOp::Sample {
                        n,
                        seed,
                        per_language,
                    },
                ),
                PrepareCmd::Split {
                    input,
                    train,
                    valid,
                    fraction,
                    seed,
                } => (
                    input,
                    train,
                    PrepareOp::Split {
                        fraction,
                        seed,
                        valid_output: valid,
                    },
                ),
                PrepareCmd::Remap {
                    input,
                    output,
                    config,
                    report,
                } => (input, output, PrepareOp::Remap { config, report }),
                PrepareCmd::OnsetTestset {
                    input,
                    output,
                    per_phoneme,
                    seed,
                } => (
                    input,
                    output,
                    PrepareOp::OnsetTestset {
                        per_phoneme_n: per_phoneme,
                        seed,
                    },
                ),
                PrepareCmd::CleanVocab {
                    corpus,
                    vocab,
                    output,
                    remove,
                    add,
                    id_map,
                } => (
                    corpus,
                    output,
                    PrepareOp::CleanVocab {
                        vocab,
                        remove,
                        add,
                        id_map,
                    },
                ),
            };
            let n = commands::prepare(&commands::PrepareArgs { input, output, op }, &res)?;
            eprintln!("wrote {n} entries");
        }
        Cmd::Synth {
            out_dir,
            spec,
            seed,
            utterances,
            plosive_rate,
            aspiration_rate,
            voicing_rate,
            breathy_rate,
            jitter,
            drop_rate,
            frame_ms,
            per_phoneme,
        } => {
            let scenario = match spec {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| phonaug::Error::Io { path, source: e })?;
                    serde_json::from_str(&text)?
                }
                None => ScenarioSpec {
                    seed,
                    n_utterances: utterances,
                    plosive_rate,
                    hm_aspiration_rate: aspiration_rate,
                    hm_voicing_rate: voicing_rate,
                    hm_breathy_rate: breathy_rate,
                    jitter,
                    drop_rate,
                    phones_per_utterance: 8,
                    frame_ms,
                },
            };
            let instances = InstanceSpec {
                seed: scenario.seed,
                per_phoneme_n: per_phoneme,
                ..InstanceSpec::default()
            };
            let s = commands::synth(
                &commands::SynthArgs {
                    out_dir,
                    scenario,
                    instances,
                },
                &res,
            )?;
            eprintln!(
                "{} utterances, {} intended matches, {} onset instances",
                s.utterances, s.truth_matches, s.instances
            );
        }
        Cmd::Evaluate {
            instances,
            out_dir,
            strict,
            lenient,
            poa,
            fail_on_tokenize_error,
        } => {
            let display = match (strict, lenient) {
                (true, _) => ValueDisplay::Strict,
                (_, true) => ValueDisplay::Lenient,
                _ => ValueDisplay::Both,
            };
            let eval = commands::evaluate(
                &commands::EvaluateArgs {
                    instances,
                    out_dir,
                    report: ReportOptions { display, poa },
                    fail_on_tokenize_error,
                },
                &res,
            )?;
            for d in &eval.diagnostics {
                eprintln!("warning: {d}");
            }
            print!("{}", eval.render_text(display));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
