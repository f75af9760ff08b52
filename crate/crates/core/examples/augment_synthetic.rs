//! Generate paired reference/helper tracks, augment them and compare with the
//! intended matches.

use std::collections::BTreeSet;

use phonaug::augment::{
    augment_utterance, AugmentOptions, AugmentationStats, MappingTable, ProximityRule,
};
use phonaug::synth::{generate, ScenarioSpec};
use phonaug::Inventory;

fn main() -> phonaug::Result<()> {
    let inv = Inventory::builtin();
    let table = MappingTable::builtin(&inv)?;
    let spec = ScenarioSpec {
        seed: 7,
        n_utterances: 500,
        jitter: 1,
        drop_rate: 0.1,
        ..ScenarioSpec::default()
    };
    let sc = generate(&spec, &inv)?;

    let mut stats = AugmentationStats::default();
    let mut got = BTreeSet::new();
    for (rm, hm) in sc.rm.iter().zip(&sc.hm) {
        let out = augment_utterance(
            rm,
            hm,
            &table,
            &ProximityRule::default(),
            &inv,
            &AugmentOptions::default(),
        )?;
        got.extend(out.applied.iter().map(|&i| (rm.utt_id.clone(), i)));
        stats.record(&out);
    }
    let truth: BTreeSet<_> = sc
        .truth
        .iter()
        .map(|t| (t.utt_id.clone(), t.rm_index))
        .collect();

    print!("{}", stats.summary());
    println!(
        "intended {}, recovered {}, spurious {}",
        truth.len(),
        truth.intersection(&got).count(),
        got.difference(&truth).count()
    );

    let first = &sc.rm[0];
    let out = augment_utterance(
        first,
        &sc.hm[0],
        &table,
        &ProximityRule::default(),
        &inv,
        &AugmentOptions::default(),
    )?;
    println!("RM {}", first.symbols().join(" "));
    println!("HM {}", sc.hm[0].symbols().join(" "));
    println!("TM {}", out.track.symbols().join(" "));
    Ok(())
}
