//! Phonation transfer for timestamped phonetic transcriptions.
//!
//! The crate takes CTC best-path label sequences from two phone recognizers, a
//! reference model whose transcriptions are kept and a helper model trained on a
//! language with richer laryngeal contrasts, and aligns their plosives by index
//! window and timestamp. Matched reference plosives keep their place of
//! articulation but take voicing and spread-glottis from the helper, giving
//! augmented training transcriptions.
//!
//! The second half of the crate scores plosive realizations at utterance onset
//! against signed voice onset times: voicing accuracy, aspiration and tenuis
//! percentages in strict and lenient variants, the share of wrong-articulator
//! predictions, an exact McNemar test for paired models, and boxplot summaries.
//!
//! Runnable walkthroughs for each stage live in `examples/`:
//!
//! ```bash
//! cargo run -p phonaug --example tokenize_ipa
//! cargo run -p phonaug --example ctc_timestamps
//! cargo run -p phonaug --example augment_synthetic
//! cargo run -p phonaug --example prepare_corpus
//! cargo run -p phonaug --example evaluate_onsets
//! cargo run -p phonaug --example significance
//! ```

pub mod augment;
pub mod commands;
pub mod corpus;
pub mod ctc;
pub mod error;
pub mod ipa;
pub mod jsonl;
pub mod metrics;
pub mod rng;
pub mod synth;
pub mod track;

pub use error::{Error, Result};
pub use ipa::{Inventory, IpaError, Manner, Phonation, Phone, PhoneFeatures, Place};
pub use track::{ModelTag, PhoneTrack, TimedPhone};
