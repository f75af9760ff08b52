//! Collapse a per-frame best path into a timestamped phone track.

use phonaug::ctc::{decode_track, greedy_collapse, FramePath};
use phonaug::{Inventory, ModelTag};

fn main() -> phonaug::Result<()> {
    let labels = [
        "_", "t", "t", "ʰ", "_", "a", "a", "_", "_", "k", "_", "k", "_",
    ];
    for run in greedy_collapse(&labels, "_") {
        println!("{:>2}  frames {}..={}", run.token, run.start, run.end);
    }

    let path = FramePath {
        utt_id: "demo".into(),
        frame_ms: 20.0,
        blank: None,
        labels: labels.iter().map(|s| s.to_string()).collect(),
        model: Some(ModelTag::Rm),
    };
    let inv = Inventory::builtin();
    let track = decode_track(&path, "_", &inv)?;
    for tp in &track.phones {
        println!(
            "{:<3} {:>5.0}-{:<5.0} ms",
            tp.phone.to_string(),
            tp.start as f64 * track.frame_ms,
            (tp.end + 1) as f64 * track.frame_ms
        );
    }

    // and back again
    let back = FramePath::from_track(&track, "_")?;
    assert_eq!(decode_track(&back, "_", &inv)?, track);
    println!("{}", serde_json::to_string(&track.to_record())?);
    Ok(())
}
