use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{EvalInstance, RealizationClass};
use crate::error::{Error, Result};
use crate::track::ModelTag;

/// Exact two-sided McNemar test on paired correctness flags.
///
/// With `b` pairs where only the first is correct and `c` where only the
/// second is, `p = min(1, 2 · P[X ≤ min(b, c)])` for `X ~ Bin(b + c, ½)`.
/// No discordant pairs gives 1.
pub fn mcnemar_exact(first: &[bool], second: &[bool]) -> Result<f64> {
    if first.len() != second.len() {
        return Err(Error::InvalidArgument(format!(
            "paired vectors differ in length: {} vs {}",
            first.len(),
            second.len()
        )));
    }
    let (b, c) = discordant(first, second);
    Ok(mcnemar_from_counts(b, c))
}

fn discordant(first: &[bool], second: &[bool]) -> (u64, u64) {
    first
        .iter()
        .zip(second)
        .fold((0, 0), |(b, c), (&x, &y)| match (x, y) {
            (true, false) => (b + 1, c),
            (false, true) => (b, c + 1),
            _ => (b, c),
        })
}

pub(crate) fn mcnemar_from_counts(b: u64, c: u64) -> f64 {
    let n = b + c;
    if n == 0 {
        return 1.0;
    }
    let k = b.min(c);
    // log-space terms so large n does not underflow
    let ln_half_n = -(n as f64) * std::f64::consts::LN_2;
    let mut ln_choose = 0.0f64;
    let mut tail = 0.0f64;
    for i in 0..=k {
        if i > 0 {
            ln_choose += ((n - i + 1) as f64).ln() - (i as f64).ln();
        }
        tail += (ln_choose + ln_half_n).exp();
    }
    (2.0 * tail).min(1.0)
}

/// Voicing-accuracy comparison between two models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairedTest {
    pub first: ModelTag,
    pub second: ModelTag,
    /// Utterances where both models gave a non-Null /b d g/ prediction.
    pub n_pairs: u64,
    pub first_only_correct: u64,
    pub second_only_correct: u64,
    pub p_value: f64,
}

/// McNemar tests on voicing correctness for every pair of models, paired by
/// `utt_id` over /b d g/ instances that neither model predicted as Null.
pub fn paired_voicing_tests(classified: &[(EvalInstance, RealizationClass)]) -> Vec<PairedTest> {
    let mut per_model: BTreeMap<ModelTag, BTreeMap<&str, bool>> = BTreeMap::new();
    for (inst, class) in classified {
        if !inst.phoneme.is_voiced() || *class == RealizationClass::Null {
            continue;
        }
        let correct = (*class == RealizationClass::Voiced) == (inst.vot_ms < 0.0);
        per_model
            .entry(inst.model)
            .or_default()
            .insert(&inst.utt_id, correct);
    }
    let models: Vec<ModelTag> = per_model.keys().copied().collect();
    let mut out = Vec::new();
    for (i, &a) in models.iter().enumerate() {
        for &b in &models[i + 1..] {
            let (ma, mb) = (&per_model[&a], &per_model[&b]);
            let (fa, fb): (Vec<bool>, Vec<bool>) = ma
                .iter()
                .filter_map(|(id, &x)| mb.get(id).map(|&y| (x, y)))
                .unzip();
            let (first_only, second_only) = discordant(&fa, &fb);
            out.push(PairedTest {
                first: a,
                second: b,
                n_pairs: fa.len() as u64,
                first_only_correct: first_only,
                second_only_correct: second_only,
                p_value: mcnemar_from_counts(first_only, second_only),
            });
        }
    }
    out
}
