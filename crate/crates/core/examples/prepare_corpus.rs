//! Filter, sample, split and remap a toy manifest, then build an onset test set.

use std::collections::BTreeMap;

use phonaug::corpus::{
    build_onset_testset, filter_downvoted, remap_invalid, sample_per_language, split_validation,
    RemapConfig, SegmentRecord,
};
use phonaug::Inventory;

fn main() -> phonaug::Result<()> {
    let words = [
        ("Ball", "bal"),
        ("Dach", "daχ"),
        ("Gast", "gast"),
        ("Post", "pɔst"),
        ("Tag", "taːk"),
        ("Kind", "kɪnt"),
    ];
    let manifest: Vec<SegmentRecord> = (0..1200)
        .map(|i| {
            let (w, t) = words[i % words.len()];
            let mut r = SegmentRecord::new(&format!("seg-{i:05}"), ["de", "nl", "sv"][i % 3], w, t);
            r.downvotes = (i % 11 == 0) as u32;
            r.analyzable = Some(i % 13 != 0);
            r
        })
        .collect();

    let clean = filter_downvoted(manifest, 0);
    let sampled = sample_per_language(&clean, 300, 1)?;
    let (train, valid) = split_validation(&sampled, 0.2, 1)?;
    println!(
        "kept {} -> sampled {} -> train {} / valid {}",
        clean.len(),
        sampled.len(),
        train.len(),
        valid.len()
    );

    let cfg = RemapConfig {
        remap: BTreeMap::from([("χ".into(), "x".into())]),
        ..RemapConfig::default()
    };
    let (remapped, report) = remap_invalid(train, &cfg, &Inventory::builtin());
    println!("remap: {} kept, {} events", remapped.len(), report.len());
    if let Some(e) = report.first() {
        println!("  {}", serde_json::to_string(e)?);
    }

    let test = build_onset_testset(&clean, 40, 3)?;
    let mut per: BTreeMap<&str, usize> = BTreeMap::new();
    for r in &test {
        *per.entry(r.phoneme.as_deref().unwrap_or("?")).or_default() += 1;
    }
    println!("onset test set: {} records {per:?}", test.len());
    Ok(())
}
